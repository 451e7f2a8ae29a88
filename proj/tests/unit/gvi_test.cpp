#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "gvipath/error.hpp"
#include "gvipath/gvi.hpp"

namespace gvipath {
namespace {

constexpr ClassIndex kRoad = 0;
constexpr ClassIndex kVegetation = 8;
constexpr ClassIndex kTerrain = 9;

template <typename F>
Errc error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::MalformedDocument;
}

ClassRaster filled(std::size_t w, std::size_t h, ClassIndex c) {
  return ClassRaster(w, h, kDefaultClassCount, std::vector<ClassIndex>(w * h, c));
}

const GreeneryClassSet& greenery() {
  static const GreeneryClassSet set = GreeneryClassSet::from_table(cityscapes_class_table());
  return set;
}

TEST(ClassTable, CityscapesGreeneryClasses) {
  EXPECT_EQ(cityscapes_class_table().names.size(), 19u);
  EXPECT_EQ(greenery().classes(), (std::set<ClassIndex>{kVegetation, kTerrain}));
}

TEST(ClassTable, ParseCsv) {
  const auto table = parse_class_table("index,name\n1,vegetation\n0,road\n2,terrain\n");
  ASSERT_EQ(table.names.size(), 3u);
  EXPECT_EQ(table.names[0], "road");
  EXPECT_EQ(GreeneryClassSet::from_table(table).classes(), (std::set<ClassIndex>{1, 2}));
  EXPECT_EQ(error_of([] { parse_class_table("index,name\n0,a\n0,b\n"); }),
            Errc::MalformedDocument);
  EXPECT_EQ(error_of([] { parse_class_table("index,name\n0,a\n2,b\n"); }),
            Errc::MalformedDocument);
}

TEST(ViewGvi, AllVegetation) {
  EXPECT_DOUBLE_EQ(compute_view_gvi(filled(4, 4, kVegetation), greenery()), 100.0);
}

TEST(ViewGvi, NoGreenery) {
  EXPECT_DOUBLE_EQ(compute_view_gvi(filled(4, 4, kRoad), greenery()), 0.0);
}

TEST(ViewGvi, SixOfSixteen) {
  std::vector<ClassIndex> pixels(16, kRoad);
  for (int i = 0; i < 4; ++i) pixels[i] = kVegetation;
  pixels[10] = pixels[11] = kTerrain;
  const ClassRaster raster(4, 4, kDefaultClassCount, pixels);
  EXPECT_EQ(count_greenery_pixels(raster, greenery()), 6u);
  EXPECT_DOUBLE_EQ(compute_view_gvi(raster, greenery()), 37.5);
}

TEST(ViewGvi, InvalidRasters) {
  EXPECT_EQ(error_of([] { ClassRaster(0, 4, 19, {}); }), Errc::InvalidRaster);
  EXPECT_EQ(error_of([] { ClassRaster(2, 2, 19, {0, 1, 2}); }), Errc::InvalidRaster);
  EXPECT_EQ(error_of([] { ClassRaster(2, 1, 19, {0, 19}); }), Errc::InvalidRaster);
  EXPECT_EQ(error_of([] { parse_raster("2 2 19\n0 1\n"); }), Errc::InvalidRaster);
}

TEST(ViewGvi, RasterRoundTrip) {
  const ClassRaster raster(3, 2, kDefaultClassCount, {0, 8, 9, 18, 1, 8});
  const ClassRaster again = parse_raster(write_raster(raster));
  EXPECT_EQ(again.width(), 3u);
  EXPECT_EQ(again.height(), 2u);
  EXPECT_TRUE(std::equal(raster.pixels().begin(), raster.pixels().end(), again.pixels().begin()));
}

TEST(ViewGvi, PropertyBoundedAndMatchesCount) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> side(1, 40);
  std::uniform_int_distribution<ClassIndex> cls(0, kDefaultClassCount - 1);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t w = side(rng), h = side(rng);
    std::vector<ClassIndex> pixels(w * h);
    std::size_t green = 0;
    for (auto& p : pixels) {
      p = cls(rng);
      green += (p == kVegetation || p == kTerrain);
    }
    const double gvi = compute_view_gvi(ClassRaster(w, h, kDefaultClassCount, pixels), greenery());
    EXPECT_GE(gvi, 0.0);
    EXPECT_LE(gvi, 100.0);
    EXPECT_DOUBLE_EQ(gvi, 100.0 * static_cast<double>(green) / static_cast<double>(w * h));
  }
}

TEST(NodeGviTest, MeanOverHeadings) {
  const std::vector<ViewObservation> views = {
      ViewObservation::from_percent(4, 0, 10), ViewObservation::from_percent(4, 90, 20),
      ViewObservation::from_percent(4, 180, 30), ViewObservation::from_percent(4, 270, 40)};
  const NodeGvi gvi = node_gvi(views);
  EXPECT_EQ(gvi.node, 4u);
  EXPECT_DOUBLE_EQ(gvi.gvi_avg, 25.0);
  EXPECT_EQ(gvi.per_heading.size(), 4u);
  EXPECT_DOUBLE_EQ(gvi.per_heading.at(180.0), 30.0);
}

TEST(NodeGviTest, SingleViewAndPixelCounts) {
  const std::vector<ViewObservation> views = {ViewObservation::from_pixels(1, 45, 3, 8)};
  EXPECT_DOUBLE_EQ(node_gvi(views).gvi_avg, 37.5);
}

TEST(NodeGviTest, Errors) {
  EXPECT_EQ(error_of([] { node_gvi(std::span<const ViewObservation>{}); }),
            Errc::EmptyObservationSet);
  EXPECT_EQ(error_of([] {
              const std::vector<ViewObservation> v = {ViewObservation::from_percent(1, 0, 10),
                                                      ViewObservation::from_percent(2, 90, 10)};
              node_gvi(v);
            }),
            Errc::MixedNodeIds);
  EXPECT_EQ(error_of([] {
              const std::vector<ViewObservation> v = {ViewObservation::from_percent(1, 90, 10),
                                                      ViewObservation::from_percent(1, 90, 20)};
              node_gvi(v);
            }),
            Errc::DuplicateHeading);
  EXPECT_EQ(error_of([] { ViewObservation::from_pixels(1, 0, 5, 4); }), Errc::OutOfRange);
  EXPECT_EQ(error_of([] { ViewObservation::from_pixels(1, 0, 0, 0); }), Errc::OutOfRange);
  EXPECT_EQ(error_of([] { ViewObservation::from_percent(1, 0, 100.5); }), Errc::OutOfRange);
}

TEST(NodeGviTest, PropertyBetweenMinAndMaxAndOrderFree) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pct(0.0, 100.0);
  std::uniform_int_distribution<int> count(1, 12);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<ViewObservation> views;
    const int k = count(rng);
    double lo = 100.0, hi = 0.0;
    for (int i = 0; i < k; ++i) {
      const double v = pct(rng);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      views.push_back(ViewObservation::from_percent(0, 30.0 * i, v));
    }
    const double avg = node_gvi(views).gvi_avg;
    EXPECT_GE(avg, lo - 1e-12);
    EXPECT_LE(avg, hi + 1e-12);
    std::shuffle(views.begin(), views.end(), rng);
    EXPECT_EQ(node_gvi(views).gvi_avg, avg);
  }
}

TEST(Bands, Examples) {
  EXPECT_EQ(classify_band(7.47), GviBand::Low);
  EXPECT_EQ(classify_band(10.0), GviBand::Moderate);
  EXPECT_EQ(classify_band(25.0), GviBand::Satisfied);
  EXPECT_EQ(classify_band(0.0), GviBand::Low);
  EXPECT_EQ(classify_band(17.999), GviBand::Moderate);
  EXPECT_EQ(classify_band(18.0), GviBand::Good);
  EXPECT_EQ(classify_band(24.999), GviBand::Good);
  EXPECT_EQ(classify_band(100.0), GviBand::Satisfied);
  EXPECT_EQ(error_of([] { classify_band(-0.1); }), Errc::OutOfRange);
  EXPECT_EQ(error_of([] { classify_band(100.01); }), Errc::OutOfRange);
  EXPECT_EQ(error_of([] { classify_band(std::nan("")); }), Errc::OutOfRange);
}

TEST(Bands, NamesAndColours) {
  EXPECT_EQ(band_name(GviBand::Low), "Low");
  EXPECT_EQ(band_name(GviBand::Satisfied), "Satisfied");
  EXPECT_EQ(band_color(GviBand::Low), "#d7191c");
  EXPECT_EQ(band_color(GviBand::Moderate), "#fdae61");
  EXPECT_EQ(band_color(GviBand::Good), "#a6d96a");
  EXPECT_EQ(band_color(GviBand::Satisfied), "#1a9641");
}

TEST(Bands, PropertyMonotone) {
  GviBand previous = GviBand::Low;
  for (int i = 0; i <= 10000; ++i) {
    const GviBand band = classify_band(i / 100.0);
    EXPECT_GE(static_cast<int>(band), static_cast<int>(previous));
    previous = band;
  }
}

TEST(Distribution, FiveNodes) {
  const std::vector<double> values = {5, 12, 20, 30, 9};
  const BandDistribution dist = gvi_distribution(values);
  EXPECT_EQ(dist.counts, (std::array<std::size_t, 4>{2, 1, 1, 1}));
  EXPECT_DOUBLE_EQ(dist.percent[0], 40.0);
  EXPECT_DOUBLE_EQ(dist.percent[3], 20.0);
  EXPECT_EQ(dist.total, 5u);
}

TEST(Distribution, BoundarySweep) {
  const std::vector<double> values = {9.999, 10.0, 17.999, 18.0, 24.999, 25.0};
  EXPECT_EQ(gvi_distribution(values).counts, (std::array<std::size_t, 4>{1, 2, 2, 1}));
}

TEST(Distribution, EmptyInput) {
  EXPECT_EQ(error_of([] { gvi_distribution(std::span<const double>{}); }), Errc::EmptyInput);
}

TEST(Distribution, PropertyCountsAndPercentSum) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pct(0.0, 100.0);
  std::uniform_int_distribution<int> size(1, 500);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> values(size(rng));
    for (auto& v : values) v = pct(rng);
    const BandDistribution dist = gvi_distribution(values);
    std::size_t count = 0;
    double percent = 0.0;
    for (std::size_t b = 0; b < kBandCount; ++b) {
      count += dist.counts[b];
      percent += dist.percent[b];
    }
    EXPECT_EQ(count, values.size());
    EXPECT_NEAR(percent, 100.0, 1e-9);
  }
}

TEST(Iou, OneThird) {
  const ClassRaster pred(2, 2, 3, {1, 1, 0, 0});
  const ClassRaster label(2, 2, 3, {0, 1, 1, 0});
  const ConfusionCounts c = confusion_counts(pred, label, 1);
  EXPECT_EQ(c.tp, 1u);
  EXPECT_EQ(c.fp, 1u);
  EXPECT_EQ(c.fn, 1u);
  EXPECT_DOUBLE_EQ(compute_iou(pred, label, 1), 1.0 / 3.0);
}

TEST(Iou, TwoThirds) {
  const ClassRaster pred(3, 1, 3, {1, 1, 1});
  const ClassRaster label(3, 1, 3, {0, 1, 1});
  EXPECT_DOUBLE_EQ(compute_iou(pred, label, 1), 2.0 / 3.0);
}

TEST(Iou, AbsentClassAndMean) {
  const ClassRaster pred(2, 1, 3, {0, 1});
  const ClassRaster label(2, 1, 3, {0, 0});
  EXPECT_DOUBLE_EQ(compute_iou(pred, label, 2), 1.0);
  // class 0: tp 1, fn 1 -> 0.5; class 1: fp 1 -> 0; class 2 absent, skipped
  EXPECT_DOUBLE_EQ(mean_iou(pred, label, {0, 1, 2}), 0.25);
  EXPECT_EQ(error_of([&] { mean_iou(pred, label, {2}); }), Errc::NoClassesPresent);
  EXPECT_EQ(error_of([&] { compute_iou(pred, ClassRaster(1, 2, 3, {0, 0}), 0); }),
            Errc::DimensionMismatch);
}

TEST(Iou, PropertySymmetricAndBounded) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<ClassIndex> cls(0, 4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ClassIndex> a(36), b(36);
    for (auto& p : a) p = cls(rng);
    for (auto& p : b) p = cls(rng);
    const ClassRaster ra(6, 6, 5, a), rb(6, 6, 5, b);
    for (ClassIndex c = 0; c < 5; ++c) {
      const double iou = compute_iou(ra, rb, c);
      EXPECT_GE(iou, 0.0);
      EXPECT_LE(iou, 1.0);
      EXPECT_DOUBLE_EQ(iou, compute_iou(rb, ra, c));
    }
    EXPECT_DOUBLE_EQ(compute_iou(ra, ra, cls(rng)), 1.0);
  }
}

TEST(ObservationTable, ParseBothMeasurementForms) {
  const auto rows = parse_observation_table(
      "node_id,heading_deg,greenery_pixels,total_pixels,gvi_percent\n"
      "A,0,3,8,\n"
      "B,90,,,12.5\n"
      "C,180,1,4\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].node_id, "A");
  EXPECT_EQ(std::get<PixelCounts>(rows[0].measurement).greenery, 3u);
  EXPECT_DOUBLE_EQ(std::get<double>(rows[1].measurement), 12.5);
  EXPECT_EQ(rows[2].line, 4u);
  const auto again = parse_observation_table(write_observation_table(rows));
  ASSERT_EQ(again.size(), 3u);
  EXPECT_EQ(again[2].node_id, "C");
  EXPECT_EQ(std::get<PixelCounts>(again[2].measurement).total, 4u);
}

TEST(ObservationTable, Errors) {
  EXPECT_EQ(error_of([] { parse_observation_table("heading,x\n"); }), Errc::MalformedDocument);
  EXPECT_EQ(error_of([] {
              parse_observation_table("node_id,heading_deg,greenery_pixels,total_pixels\nA,x,1,2\n");
            }),
            Errc::MalformedDocument);
  EXPECT_EQ(error_of([] {
              parse_observation_table("node_id,heading_deg,greenery_pixels,total_pixels\nA,0,1\n");
            }),
            Errc::MalformedDocument);
}

}  // namespace
}  // namespace gvipath
