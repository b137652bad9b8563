#ifndef DDID_IO_HPP
#define DDID_IO_HPP

#include <filesystem>
#include <string>

#include "ddid/bargmann.hpp"
#include "ddid/density.hpp"
#include "ddid/identify.hpp"
#include "ddid/recovery.hpp"
#include "ddid/timefreq.hpp"
#include "ddid/types.hpp"

namespace ddid::io {

/// Thrown on malformed content; filesystem failures surface as
/// std::filesystem errors or std::runtime_error from the stream layer.
class format_error : public std::runtime_error {
public:
  explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

// JSON round trips. Readers reject NaN/Inf and malformed schemas.
// measure:    {"atoms":[{"tau":..,"nu":..,"re":..,"im":..},...]}
// support:    {"atoms":[{"tau":..,"nu":..},...]}
// gabor:      {"terms":[{"re":..,"im":..,"tau":..,"nu":..},...]}
// sampled:    {"t0":..,"dt":..,"re":[..],"im":[..]}
DiscreteMeasure read_measure(const std::filesystem::path& file);
SupportSet read_support(const std::filesystem::path& file);
GaborExpansion read_gabor(const std::filesystem::path& file);
SampledSignal read_sampled(const std::filesystem::path& file);

void write_measure(const DiscreteMeasure& mu, const std::filesystem::path& file);
void write_support(const SupportSet& s, const std::filesystem::path& file);
void write_gabor(const GaborExpansion& x, const std::filesystem::path& file);
void write_sampled(const SampledSignal& x, const std::filesystem::path& file);

// In-memory JSON variants (text), used by the CLI for inline descriptors.
DiscreteMeasure measure_from_json(const std::string& text);
SupportSet support_from_json(const std::string& text);

// CSV writers; headers are mandatory, ',' separator, '.' decimal,
// %.17g float formatting for cross-run byte identity.
void write_density_csv(const DensityCurve& curve, const std::filesystem::path& file);
void write_ladder_csv(const std::vector<std::tuple<int, double, double>>& rows,
                      const std::filesystem::path& file);  // size,lower,upper
void write_stft_csv(const STFTField& field, const std::filesystem::path& file);
void write_fock_grid_csv(const FockFunction& f, const TFGrid& grid,
                         const std::filesystem::path& file);
void write_sweep_csv(const std::vector<std::array<double, 4>>& rows,
                     const std::filesystem::path& file);  // noise,max_pos_err,max_wt_err,spurious_norm

// JSON reports.
std::string to_json(const RieszBounds& b);
std::string to_json(const IdentifiabilityConstants& c);
std::string to_json(const RecoveryReport& r);

/// %.17g rendering used by every CSV writer.
std::string format_double(double v);

/// Write-then-rename for atomic appearance of output files.
void write_text_atomic(const std::filesystem::path& file, const std::string& text);

}  // namespace ddid::io

#endif
