#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gvipath/network.hpp"

namespace gvipath {

using ClassIndex = std::uint32_t;

inline constexpr std::uint32_t kDefaultClassCount = 19;

/// Per-pixel class indices of one segmented street-level view.
class ClassRaster {
 public:
  ClassRaster(std::size_t width, std::size_t height, std::uint32_t class_count,
              std::vector<ClassIndex> pixels);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::uint32_t class_count() const noexcept { return class_count_; }
  std::size_t pixel_count() const noexcept { return pixels_.size(); }
  std::span<const ClassIndex> pixels() const noexcept { return pixels_; }
  ClassIndex at(std::size_t x, std::size_t y) const { return pixels_.at(y * width_ + x); }

 private:
  std::size_t width_;
  std::size_t height_;
  std::uint32_t class_count_;
  std::vector<ClassIndex> pixels_;
};

/// Raster document: header "W H C", then H lines of W class indices.
ClassRaster parse_raster(std::string_view document);
std::string write_raster(const ClassRaster& raster);

/// Class index -> name, e.g. the 19 Cityscapes labels.
struct ClassTable {
  std::vector<std::string> names;
};

/// CSV with header `index,name`. Indices must cover 0..C-1 exactly once.
ClassTable parse_class_table(std::string_view document);
const ClassTable& cityscapes_class_table();

class GreeneryClassSet {
 public:
  GreeneryClassSet(std::set<ClassIndex> classes, std::uint32_t class_count);

  /// The classes named "vegetation" and "terrain" in `table`.
  static GreeneryClassSet from_table(const ClassTable& table);

  bool contains(ClassIndex c) const noexcept { return classes_.contains(c); }
  const std::set<ClassIndex>& classes() const noexcept { return classes_; }

 private:
  std::set<ClassIndex> classes_;
};

std::uint64_t count_greenery_pixels(const ClassRaster& raster,
                                    const GreeneryClassSet& greenery);

/// Percentage of pixels whose class is in `greenery`, in [0, 100].
double compute_view_gvi(const ClassRaster& raster, const GreeneryClassSet& greenery);

struct PixelCounts {
  std::uint64_t greenery = 0;
  std::uint64_t total = 1;
};

/// One camera heading at one node: either raw pixel counts or a percentage.
struct ViewObservation {
  NodeId node = 0;
  double heading_deg = 0.0;
  std::variant<PixelCounts, double> measurement;

  static ViewObservation from_pixels(NodeId node, double heading_deg,
                                     std::uint64_t greenery_pixels,
                                     std::uint64_t total_pixels);
  static ViewObservation from_percent(NodeId node, double heading_deg, double gvi_percent);

  double gvi_percent() const;
};

struct NodeGvi {
  NodeId node = 0;
  std::map<double, double> per_heading;
  double gvi_avg = 0.0;
};

/// Aggregates the views of one node into its mean GVI over all headings.
NodeGvi node_gvi(std::span<const ViewObservation> observations);

enum class GviBand : std::uint8_t { Low = 0, Moderate = 1, Good = 2, Satisfied = 3 };

inline constexpr std::size_t kBandCount = 4;
inline constexpr std::array<GviBand, kBandCount> kAllBands = {
    GviBand::Low, GviBand::Moderate, GviBand::Good, GviBand::Satisfied};

/// [0,10) Low, [10,18) Moderate, [18,25) Good, [25,100] Satisfied.
GviBand classify_band(double gvi_percent);
std::string_view band_name(GviBand band) noexcept;
/// Fixed four-colour ramp used by every map output.
std::string_view band_color(GviBand band) noexcept;

struct BandDistribution {
  std::array<std::size_t, kBandCount> counts{};
  std::array<double, kBandCount> percent{};
  std::size_t total = 0;
};

BandDistribution gvi_distribution(std::span<const double> gvi_values);
BandDistribution gvi_distribution(std::span<const NodeGvi> node_gvis);

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
};

ConfusionCounts confusion_counts(const ClassRaster& pred, const ClassRaster& label,
                                 ClassIndex class_index);

/// TP / (TP + FP + FN); 1.0 when the class appears in neither raster.
double compute_iou(const ClassRaster& pred, const ClassRaster& label, ClassIndex class_index);

/// Mean IoU over the classes of `classes` that occur in pred or label.
double mean_iou(const ClassRaster& pred, const ClassRaster& label,
                const std::set<ClassIndex>& classes);

/// A row of the observation table before node ids are resolved.
struct ObservationRow {
  std::string node_id;
  double heading_deg = 0.0;
  std::variant<PixelCounts, double> measurement;
  std::size_t line = 0;
};

/// CSV `node_id,heading_deg,greenery_pixels,total_pixels[,gvi_percent]` with a
/// header row. Empty pixel fields mean the fifth column carries the percent.
std::vector<ObservationRow> parse_observation_table(std::string_view document);
std::string write_observation_table(std::span<const ObservationRow> rows);

}  // namespace gvipath
