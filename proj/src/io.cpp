// SPDX-License-Identifier: Apache-2.0
#include "nfchan/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace nfchan {

namespace {

// Fixed-width scientific formatting keeps output byte-identical across runs.
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

double to_db(double v) {
    // Zero eigenvalues/NMSE would be -inf; clip to a deterministic floor.
    return 10.0 * std::log10(std::max(v, 1e-300));
}

const char* flavor_name(ResponseFlavor flavor) {
    return flavor == ResponseFlavor::exact ? "exact" : "fresnel";
}

}  // namespace

void write_eigenspectrum_csv(std::ostream& out, const EigenSpectrum& spectrum,
                             const std::string& label) {
    out << "# schema=" << kEigenspectrumSchema << "\n";
    out << "# label=" << label << "\n";
    out << "index,eigenvalue,eigenvalue_db,cumulative_fraction\n";
    const double total = spectrum.eigenvalues.sum();
    double cumulative = 0.0;
    for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
        const double v = spectrum.eigenvalues(i);
        cumulative += v;
        out << (i + 1) << ',' << fmt(v) << ',' << fmt(to_db(v)) << ','
            << fmt(total > 0.0 ? cumulative / total : 0.0) << "\n";
    }
}

void write_nmse_csv(std::ostream& out, const ExperimentConfig& config, const NmseCurve& curve) {
    out << "# schema=" << kNmseSchema << "\n";
    out << "# m_h=" << config.geometry.antennas_per_row()
        << " m_v=" << config.geometry.antennas_per_column() << "\n";
    out << "# spacing=" << fmt(config.geometry.spacing())
        << " wavelength=" << fmt(config.geometry.wavelength()) << "\n";
    out << "# phi=[" << fmt(config.region.phi1) << ',' << fmt(config.region.phi2)
        << "] theta=[" << fmt(config.region.theta1) << ',' << fmt(config.region.theta2)
        << "] d=[" << fmt(config.region.d1) << ',' << fmt(config.region.d2) << "]\n";
    out << "# clusters=" << config.cluster_count << " snr_db=" << fmt(config.snr_db)
        << " beta=" << fmt(config.beta) << "\n";
    out << "# trials=" << config.trials << " blocks=" << config.max_blocks
        << " seed=" << config.seed << " response=" << flavor_name(config.flavor)
        << " rank_fraction=" << fmt(config.rank_fraction) << "\n";
    out << "block,estimator,nmse,nmse_db,stderr\n";
    for (int block = 0; block < config.max_blocks; ++block) {
        for (const EstimatorCurve& ec : curve.estimators) {
            out << (block + 1) << ',' << ec.name << ',' << fmt(ec.nmse[block]) << ','
                << fmt(to_db(ec.nmse[block])) << ',' << fmt(ec.standard_error[block]) << "\n";
        }
    }
}

void write_correlation_csv(std::ostream& out, const CorrelationMatrix& matrix) {
    out << "# schema=" << kCorrelationCsvSchema << "\n";
    out << "n,m,re,im\n";
    const Eigen::Index m_total = matrix.entries.rows();
    for (Eigen::Index n = 0; n < m_total; ++n) {
        for (Eigen::Index m = n; m < m_total; ++m) {
            out << (n + 1) << ',' << (m + 1) << ',' << fmt(matrix.entries(n, m).real()) << ','
                << fmt(matrix.entries(n, m).imag()) << "\n";
        }
    }
}

void write_correlation_binary(std::ostream& out, const CorrelationMatrix& matrix,
                              std::uint32_t flags) {
    const std::uint32_t version = 1;
    const std::uint32_t m_total = static_cast<std::uint32_t>(matrix.entries.rows());
    out.write("NFCR", 4);
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    out.write(reinterpret_cast<const char*>(&m_total), sizeof(m_total));
    out.write(reinterpret_cast<const char*>(&flags), sizeof(flags));
    for (std::uint32_t n = 0; n < m_total; ++n) {
        for (std::uint32_t m = n; m < m_total; ++m) {
            const std::complex<double> v = matrix.entries(n, m);
            out.write(reinterpret_cast<const char*>(&v), sizeof(v));
        }
    }
}

CorrelationMatrix read_correlation_binary(std::istream& in, std::uint32_t* flags) {
    char magic[4];
    std::uint32_t version = 0;
    std::uint32_t m_total = 0;
    std::uint32_t file_flags = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    in.read(reinterpret_cast<char*>(&m_total), sizeof(m_total));
    in.read(reinterpret_cast<char*>(&file_flags), sizeof(file_flags));
    if (!in || std::string_view(magic, 4) != "NFCR" || version != 1) {
        throw std::runtime_error("not a correlation matrix dump");
    }
    Eigen::MatrixXcd entries(m_total, m_total);
    for (std::uint32_t n = 0; n < m_total; ++n) {
        for (std::uint32_t m = n; m < m_total; ++m) {
            std::complex<double> v;
            in.read(reinterpret_cast<char*>(&v), sizeof(v));
            entries(n, m) = v;
            entries(m, n) = std::conj(v);
        }
    }
    if (!in) {
        throw std::runtime_error("truncated correlation matrix dump");
    }
    if (flags != nullptr) {
        *flags = file_flags;
    }
    const double beta = m_total > 0 ? entries.real().trace() / m_total : 0.0;
    return CorrelationMatrix{std::move(entries), beta};
}

}  // namespace nfchan
