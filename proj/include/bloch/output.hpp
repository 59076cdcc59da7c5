#pragma once

#include <string>
#include <vector>

#include "bloch/config.hpp"

namespace bloch {

/// Fixed CSV header used by all band tables.
extern const char* kBandCsvHeader;

/// %.17g rendering; round-trips doubles bitwise through strtod.
std::string fmt_g17(double x);

std::string band_csv(const std::vector<BandPoint>& points);
void write_band_csv(const std::string& path, const std::vector<BandPoint>& points);
std::vector<BandPoint> parse_band_csv_text(const std::string& text);
std::vector<BandPoint> read_band_csv(const std::string& path);

void write_converge_csv(const std::string& path,
                        const std::vector<ConvergenceRow>& rows);

/// JSON run manifest: config echo, versions, fixed seeds, thread count,
/// and any skipped samples / per-point failures. Deliberately carries no
/// timestamps so identical runs produce identical files.
void write_manifest(const std::string& path, const RunConfig& cfg,
                    const SweepResult* result, const std::string& command);

/// Emits a small matplotlib script that renders the CSV tables next to it.
void write_plot_script(const std::string& path);

}  // namespace bloch
