#pragma once

#include "rholap/coupling_ops.hpp"
#include "rholap/laplacian.hpp"
#include "rholap/mmspace.hpp"
#include "rholap/regularity.hpp"
#include "rholap/transport.hpp"
#include "rholap/weyl.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>

namespace rholap {

using Json = nlohmann::ordered_json;

inline constexpr const char* kLibraryVersion = "1.0.0";
inline constexpr int kFormatVersion = 1;

/// { tool, version, format_version, config } embedded in every output.
Json output_header(const Json& config);

/// mm-space file:
///   { "label", "points": [ids], "metric": {...}, "weights": ["decimal" | "p/q", ...] }
/// metric kinds: matrix (distances: rows, full or lower triangle), euclidean (dim,
/// coordinates), sphere (radius, unit-vector coordinates), torus (periods,
/// coordinates). Other metrics are written as matrices.
Json space_to_json(const MMSpace& space);
MMSpace space_from_json(const Json& j);
/// Also reads the net out of a discretize output.
MMSpace load_space(const std::string& path);
void save_space(const std::string& path, const MMSpace& space);

Json coupling_to_json(const Coupling& c);
Json certificate_to_json(const ClosenessCertificate& cert);
/// The spaces are needed to rebuild shared and assignment cross metrics.
ClosenessCertificate certificate_from_json(const Json& j, const MMSpace& x, const MMSpace& y);
ClosenessCertificate load_certificate(const std::string& path, const MMSpace& x, const MMSpace& y);
Json violator_to_json(const HallViolator& v);
Json certificate_check_to_json(const CertificateCheck& c);

Json report_to_json(const ConditionReport& r);
Json report_to_json(const StabilityProbeReport& r);
Json report_to_json(const StabilityReport& r);
Json report_to_json(const MetricChangeReport& r);
Json report_to_json(const TxyReport& r);
Json report_to_json(const ManyEigenvaluesReport& r);
Json report_to_json(const FewEigenvaluesReport& r);

/// Columns k, lambda, below_rho_inv2, residual; header lines start with '#'.
void write_spectrum_csv(std::ostream& out, const Spectrum& s, const Json& header);

/// "per-ball", "constant:<phi>" or "file:<path>" (whitespace-separated
/// values, one per point).
Normalization parse_normalization(const std::string& text);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace rholap
