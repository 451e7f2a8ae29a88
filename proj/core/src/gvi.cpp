#include "gvipath/gvi.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "gvipath/error.hpp"
#include "text.hpp"

namespace gvipath {

namespace {

// Exact integer numerator; the single division is the only rounding step.
double percent_of(std::uint64_t part, std::uint64_t total) {
  return static_cast<double>(part * 100) / static_cast<double>(total);
}

void check_heading(double heading_deg) {
  if (!(heading_deg >= 0.0 && heading_deg < 360.0)) {
    throw Error(Errc::OutOfRange, "heading must be in [0, 360), got " +
                                      text::format_double(heading_deg));
  }
}

void check_percent(double gvi_percent) {
  if (!(gvi_percent >= 0.0 && gvi_percent <= 100.0)) {
    throw Error(Errc::OutOfRange,
                "GVI must be in [0, 100], got " + text::format_double(gvi_percent));
  }
}

void check_pixels(std::uint64_t greenery, std::uint64_t total) {
  if (total == 0) throw Error(Errc::OutOfRange, "total pixel count must be >= 1");
  if (greenery > total) {
    throw Error(Errc::OutOfRange, "greenery pixels exceed total pixels");
  }
}

void check_same_shape(const ClassRaster& a, const ClassRaster& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(Errc::DimensionMismatch,
                "rasters differ in size: " + std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                    "x" + std::to_string(b.height()));
  }
}

std::vector<std::string_view> whitespace_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

ClassRaster::ClassRaster(std::size_t width, std::size_t height, std::uint32_t class_count,
                         std::vector<ClassIndex> pixels)
    : width_(width), height_(height), class_count_(class_count), pixels_(std::move(pixels)) {
  if (width_ == 0 || height_ == 0) {
    throw Error(Errc::InvalidRaster, "raster dimensions must be >= 1");
  }
  if (class_count_ == 0) throw Error(Errc::InvalidRaster, "class count must be >= 1");
  if (pixels_.size() != width_ * height_) {
    throw Error(Errc::InvalidRaster, "raster has " + std::to_string(pixels_.size()) +
                                         " pixels, expected " +
                                         std::to_string(width_ * height_));
  }
  for (ClassIndex c : pixels_) {
    if (c >= class_count_) {
      throw Error(Errc::InvalidRaster, "pixel class " + std::to_string(c) +
                                           " outside [0, " +
                                           std::to_string(class_count_) + ")");
    }
  }
}

ClassRaster parse_raster(std::string_view document) {
  std::vector<std::vector<std::string_view>> rows;
  for (std::string_view line : text::lines(document)) {
    auto tokens = whitespace_tokens(line);
    if (!tokens.empty()) rows.push_back(std::move(tokens));
  }
  if (rows.empty() || rows.front().size() != 3) {
    throw Error(Errc::InvalidRaster, "raster header must be \"W H C\"");
  }
  const auto w = text::parse_int<std::size_t>(rows[0][0]);
  const auto h = text::parse_int<std::size_t>(rows[0][1]);
  const auto c = text::parse_int<std::uint32_t>(rows[0][2]);
  if (!w || !h || !c) throw Error(Errc::InvalidRaster, "raster header must be integers");
  if (rows.size() - 1 != *h) {
    throw Error(Errc::InvalidRaster, "raster declares " + std::to_string(*h) +
                                         " rows but has " + std::to_string(rows.size() - 1));
  }
  std::vector<ClassIndex> pixels;
  pixels.reserve(*w * *h);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != *w) {
      throw Error(Errc::InvalidRaster, "raster row " + std::to_string(r - 1) + " has " +
                                           std::to_string(rows[r].size()) + " values");
    }
    for (std::string_view token : rows[r]) {
      const auto value = text::parse_int<ClassIndex>(token);
      if (!value) {
        throw Error(Errc::InvalidRaster, "bad pixel value \"" + std::string(token) + "\"");
      }
      pixels.push_back(*value);
    }
  }
  return ClassRaster(*w, *h, *c, std::move(pixels));
}

std::string write_raster(const ClassRaster& raster) {
  std::ostringstream out;
  out << raster.width() << ' ' << raster.height() << ' ' << raster.class_count() << '\n';
  for (std::size_t y = 0; y < raster.height(); ++y) {
    for (std::size_t x = 0; x < raster.width(); ++x) {
      if (x) out << ' ';
      out << raster.at(x, y);
    }
    out << '\n';
  }
  return out.str();
}

ClassTable parse_class_table(std::string_view document) {
  const auto all = text::lines(document);
  std::size_t i = 0;
  while (i < all.size() && text::trim(all[i]).empty()) ++i;
  if (i == all.size() || text::trim(all[i]) != "index,name") {
    throw Error(Errc::MalformedDocument, "class table must start with header index,name");
  }
  std::map<ClassIndex, std::string> entries;
  for (++i; i < all.size(); ++i) {
    if (text::trim(all[i]).empty()) continue;
    const auto fields = text::split(all[i], ',');
    const auto index = fields.size() == 2 ? text::parse_int<ClassIndex>(fields[0])
                                          : std::optional<ClassIndex>{};
    if (!index || text::trim(fields[1]).empty()) {
      throw Error(Errc::MalformedDocument,
                  "class table line " + std::to_string(i + 1) + ": expected index,name");
    }
    if (!entries.emplace(*index, std::string(text::trim(fields[1]))).second) {
      throw Error(Errc::MalformedDocument,
                  "class table repeats index " + std::to_string(*index));
    }
  }
  ClassTable table;
  for (const auto& [index, name] : entries) {
    if (index != table.names.size()) {
      throw Error(Errc::MalformedDocument, "class table indices must cover 0..C-1");
    }
    table.names.push_back(name);
  }
  if (table.names.empty()) throw Error(Errc::EmptyInput, "class table is empty");
  return table;
}

const ClassTable& cityscapes_class_table() {
  static const ClassTable table{{"road", "sidewalk", "building", "wall", "fence", "pole",
                                 "traffic light", "traffic sign", "vegetation", "terrain",
                                 "sky", "person", "rider", "car", "truck", "bus", "train",
                                 "motorcycle", "bicycle"}};
  return table;
}

GreeneryClassSet::GreeneryClassSet(std::set<ClassIndex> classes, std::uint32_t class_count)
    : classes_(std::move(classes)) {
  if (classes_.empty()) throw Error(Errc::EmptyInput, "greenery class set is empty");
  if (*classes_.rbegin() >= class_count) {
    throw Error(Errc::OutOfRange, "greenery class " + std::to_string(*classes_.rbegin()) +
                                      " outside [0, " + std::to_string(class_count) + ")");
  }
}

GreeneryClassSet GreeneryClassSet::from_table(const ClassTable& table) {
  std::set<ClassIndex> classes;
  for (ClassIndex i = 0; i < table.names.size(); ++i) {
    if (table.names[i] == "vegetation" || table.names[i] == "terrain") classes.insert(i);
  }
  if (classes.empty()) {
    throw Error(Errc::EmptyInput, "class table names neither vegetation nor terrain");
  }
  return GreeneryClassSet(std::move(classes), static_cast<std::uint32_t>(table.names.size()));
}

std::uint64_t count_greenery_pixels(const ClassRaster& raster,
                                    const GreeneryClassSet& greenery) {
  if (*greenery.classes().rbegin() >= raster.class_count()) {
    throw Error(Errc::OutOfRange, "greenery classes exceed the raster's class count");
  }
  std::uint64_t count = 0;
  for (ClassIndex c : raster.pixels()) count += greenery.contains(c) ? 1 : 0;
  return count;
}

double compute_view_gvi(const ClassRaster& raster, const GreeneryClassSet& greenery) {
  return percent_of(count_greenery_pixels(raster, greenery), raster.pixel_count());
}

ViewObservation ViewObservation::from_pixels(NodeId node, double heading_deg,
                                             std::uint64_t greenery_pixels,
                                             std::uint64_t total_pixels) {
  check_heading(heading_deg);
  check_pixels(greenery_pixels, total_pixels);
  return {node, heading_deg, PixelCounts{greenery_pixels, total_pixels}};
}

ViewObservation ViewObservation::from_percent(NodeId node, double heading_deg,
                                              double gvi_percent) {
  check_heading(heading_deg);
  check_percent(gvi_percent);
  return {node, heading_deg, gvi_percent};
}

double ViewObservation::gvi_percent() const {
  if (const auto* counts = std::get_if<PixelCounts>(&measurement)) {
    check_pixels(counts->greenery, counts->total);
    return percent_of(counts->greenery, counts->total);
  }
  const double value = std::get<double>(measurement);
  check_percent(value);
  return value;
}

NodeGvi node_gvi(std::span<const ViewObservation> observations) {
  if (observations.empty()) {
    throw Error(Errc::EmptyObservationSet, "node has no observations");
  }
  NodeGvi result;
  result.node = observations.front().node;
  for (const ViewObservation& obs : observations) {
    if (obs.node != result.node) {
      throw Error(Errc::MixedNodeIds, "observations mix nodes " +
                                          std::to_string(result.node) + " and " +
                                          std::to_string(obs.node));
    }
    check_heading(obs.heading_deg);
    if (!result.per_heading.emplace(obs.heading_deg, obs.gvi_percent()).second) {
      throw Error(Errc::DuplicateHeading,
                  "node " + std::to_string(result.node) + " repeats heading " +
                      text::format_double(obs.heading_deg));
    }
  }
  // Summing in heading order keeps the mean independent of input order.
  double sum = 0.0;
  for (const auto& [heading, gvi] : result.per_heading) sum += gvi;
  result.gvi_avg = sum / static_cast<double>(result.per_heading.size());
  return result;
}

GviBand classify_band(double gvi_percent) {
  check_percent(gvi_percent);
  if (gvi_percent < 10.0) return GviBand::Low;
  if (gvi_percent < 18.0) return GviBand::Moderate;
  if (gvi_percent < 25.0) return GviBand::Good;
  return GviBand::Satisfied;
}

std::string_view band_name(GviBand band) noexcept {
  switch (band) {
    case GviBand::Low: return "Low";
    case GviBand::Moderate: return "Moderate";
    case GviBand::Good: return "Good";
    case GviBand::Satisfied: return "Satisfied";
  }
  return "Unknown";
}

std::string_view band_color(GviBand band) noexcept {
  switch (band) {
    case GviBand::Low: return "#d7191c";
    case GviBand::Moderate: return "#fdae61";
    case GviBand::Good: return "#a6d96a";
    case GviBand::Satisfied: return "#1a9641";
  }
  return "#808080";
}

BandDistribution gvi_distribution(std::span<const double> gvi_values) {
  if (gvi_values.empty()) throw Error(Errc::EmptyInput, "no GVI values to classify");
  BandDistribution dist;
  for (double value : gvi_values) {
    ++dist.counts[static_cast<std::size_t>(classify_band(value))];
  }
  dist.total = gvi_values.size();
  for (std::size_t b = 0; b < kBandCount; ++b) {
    dist.percent[b] = percent_of(dist.counts[b], dist.total);
  }
  return dist;
}

BandDistribution gvi_distribution(std::span<const NodeGvi> node_gvis) {
  std::vector<double> values;
  values.reserve(node_gvis.size());
  for (const NodeGvi& g : node_gvis) values.push_back(g.gvi_avg);
  return gvi_distribution(values);
}

ConfusionCounts confusion_counts(const ClassRaster& pred, const ClassRaster& label,
                                 ClassIndex class_index) {
  check_same_shape(pred, label);
  ConfusionCounts counts;
  const auto p = pred.pixels();
  const auto l = label.pixels();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool in_pred = p[i] == class_index;
    const bool in_label = l[i] == class_index;
    counts.tp += in_pred && in_label;
    counts.fp += in_pred && !in_label;
    counts.fn += !in_pred && in_label;
  }
  return counts;
}

double compute_iou(const ClassRaster& pred, const ClassRaster& label,
                   ClassIndex class_index) {
  const ConfusionCounts c = confusion_counts(pred, label, class_index);
  const std::uint64_t denom = c.tp + c.fp + c.fn;
  if (denom == 0) return 1.0;
  return static_cast<double>(c.tp) / static_cast<double>(denom);
}

double mean_iou(const ClassRaster& pred, const ClassRaster& label,
                const std::set<ClassIndex>& classes) {
  check_same_shape(pred, label);
  double sum = 0.0;
  std::size_t present = 0;
  for (ClassIndex c : classes) {
    const ConfusionCounts counts = confusion_counts(pred, label, c);
    const std::uint64_t denom = counts.tp + counts.fp + counts.fn;
    if (denom == 0) continue;
    sum += static_cast<double>(counts.tp) / static_cast<double>(denom);
    ++present;
  }
  if (present == 0) {
    throw Error(Errc::NoClassesPresent, "none of the requested classes occur");
  }
  return sum / static_cast<double>(present);
}

std::vector<ObservationRow> parse_observation_table(std::string_view document) {
  const auto all = text::lines(document);
  std::size_t i = 0;
  while (i < all.size() && text::trim(all[i]).empty()) ++i;
  if (i == all.size()) throw Error(Errc::MalformedDocument, "observation table is empty");
  {
    const auto header = text::split(all[i], ',');
    if (header.size() < 4 || text::trim(header[0]) != "node_id") {
      throw Error(Errc::MalformedDocument,
                  "observation table needs a header row starting with node_id");
    }
  }
  std::vector<ObservationRow> rows;
  for (++i; i < all.size(); ++i) {
    if (text::trim(all[i]).empty()) continue;
    const std::size_t line_no = i + 1;
    auto fail = [&](const std::string& why) -> Error {
      return Error(Errc::MalformedDocument,
                   "observation table line " + std::to_string(line_no) + ": " + why);
    };
    const auto fields = text::split(all[i], ',');
    if (fields.size() != 4 && fields.size() != 5) throw fail("expected 4 or 5 fields");

    ObservationRow row;
    row.line = line_no;
    row.node_id = std::string(text::trim(fields[0]));
    if (row.node_id.empty()) throw fail("empty node_id");
    const auto heading = text::parse_double(fields[1]);
    if (!heading) throw fail("bad heading_deg");
    row.heading_deg = *heading;

    const auto g_field = text::trim(fields[2]);
    const auto t_field = text::trim(fields[3]);
    const auto p_field = fields.size() == 5 ? text::trim(fields[4]) : std::string_view{};
    try {
      if (!g_field.empty() && !t_field.empty()) {
        if (!p_field.empty()) throw fail("give pixel counts or a percent, not both");
        const auto g = text::parse_int<std::uint64_t>(g_field);
        const auto t = text::parse_int<std::uint64_t>(t_field);
        if (!g || !t) throw fail("bad pixel counts");
        row.measurement =
            ViewObservation::from_pixels(0, row.heading_deg, *g, *t).measurement;
      } else if (g_field.empty() && t_field.empty()) {
        const auto p = text::parse_double(p_field);
        if (!p) throw fail("missing gvi_percent");
        row.measurement = ViewObservation::from_percent(0, row.heading_deg, *p).measurement;
      } else {
        throw fail("greenery_pixels and total_pixels must both be set or both empty");
      }
    } catch (const Error& e) {
      if (e.code() != Errc::OutOfRange) throw;
      throw Error(Errc::OutOfRange,
                  "observation table line " + std::to_string(line_no) + ": " + e.what());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string write_observation_table(std::span<const ObservationRow> rows) {
  std::string out = "node_id,heading_deg,greenery_pixels,total_pixels,gvi_percent\n";
  for (const ObservationRow& row : rows) {
    if (row.node_id.find_first_of(",\r\n") != std::string::npos) {
      throw Error(Errc::MalformedDocument,
                  "node id \"" + row.node_id + "\" cannot be written to CSV");
    }
    out += row.node_id;
    out += ',';
    out += text::format_double(row.heading_deg);
    if (const auto* counts = std::get_if<PixelCounts>(&row.measurement)) {
      out += ',' + std::to_string(counts->greenery) + ',' + std::to_string(counts->total) +
             ",\n";
    } else {
      out += ",,," + text::format_double(std::get<double>(row.measurement)) + '\n';
    }
  }
  return out;
}

}  // namespace gvipath
