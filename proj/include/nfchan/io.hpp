// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include "nfchan/correlation.hpp"
#include "nfchan/sim.hpp"
#include "nfchan/subspace.hpp"

namespace nfchan {

// CSV schemas are versioned; the schema tag is the first header line of every
// file so downstream tooling can detect format changes.
inline constexpr const char* kEigenspectrumSchema = "nfchan.eigenspectrum.v1";
inline constexpr const char* kNmseSchema = "nfchan.nmse.v1";
inline constexpr const char* kCorrelationCsvSchema = "nfchan.correlation.v1";

// (index, eigenvalue, eigenvalue_db, cumulative_fraction) rows, one per
// eigenvalue in descending order. `label` lands in the header metadata.
void write_eigenspectrum_csv(std::ostream& out, const EigenSpectrum& spectrum,
                             const std::string& label);

// (block, estimator, nmse, nmse_db, stderr) rows; the header carries the full
// experiment configuration and seed.
void write_nmse_csv(std::ostream& out, const ExperimentConfig& config, const NmseCurve& curve);

// (n, m, re, im) rows of the upper triangle; intended for small matrices.
void write_correlation_csv(std::ostream& out, const CorrelationMatrix& matrix);

// Binary dump: 16-byte header (magic "NFCR", u32 version, u32 M, u32 flags)
// followed by the row-major upper triangle as complex doubles.
void write_correlation_binary(std::ostream& out, const CorrelationMatrix& matrix,
                              std::uint32_t flags = 0);

// Reads a binary dump back into a full Hermitian matrix. Throws
// std::runtime_error on malformed input. beta is recovered from the diagonal.
CorrelationMatrix read_correlation_binary(std::istream& in, std::uint32_t* flags = nullptr);

}  // namespace nfchan
