#include "primsynth/stats.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "primsynth/volio.hpp"

namespace primsynth {

namespace fs = std::filesystem;

double DatasetStats::rejection_rate() const {
  const auto total = accepted_total + rejected_total;
  return total == 0 ? 0.0 : static_cast<double>(rejected_total) / static_cast<double>(total);
}

double DatasetStats::drawn_chi_square(const std::vector<ShapeClass>& classes) const {
  std::int64_t total = 0;
  for (const auto& c : classes) total += drawn_class_histogram[static_cast<std::size_t>(c.id())];
  if (classes.empty() || total == 0) return 0.0;
  const double expected = static_cast<double>(total) / static_cast<double>(classes.size());
  double chi2 = 0.0;
  for (const auto& c : classes) {
    const double diff = static_cast<double>(drawn_class_histogram[static_cast<std::size_t>(c.id())]) - expected;
    chi2 += diff * diff / expected;
  }
  return chi2;
}

DatasetStats stats_from_manifest(const DatasetManifest& manifest, const fs::path& root, bool read_masks) {
  DatasetStats st;
  st.sample_count = static_cast<std::int64_t>(manifest.samples.size());
  using ProfileKey = std::tuple<double, double, double, int, int, double>;
  std::array<std::set<ProfileKey>, kZRuleCount> profiles;
  double overlap_sum = 0.0;
  int zmin = std::numeric_limits<int>::max();
  int zmax = 0;

  for (const auto& entry : manifest.samples) {
    std::int64_t accepted = 0;
    for (const auto& p : entry.placements) {
      const auto id = static_cast<std::size_t>(p.shape_class.id());
      ++st.drawn_class_histogram[id];
      profiles[static_cast<std::size_t>(z_rule_index(p.shape_class.z))].insert(
          ProfileKey{p.params.o1, p.params.o2, p.params.o3, p.params.z_c, p.params.z_max, p.radius_max});
      if (p.accepted) {
        ++accepted;
        ++st.class_histogram[id];
        overlap_sum += p.overlap_ratio;
        zmin = std::min(zmin, p.z_extent);
        zmax = std::max(zmax, p.z_extent);
      } else {
        ++st.rejected_total;
      }
    }
    st.accepted_total += accepted;
    st.accepted_counts.push_back(accepted);

    if (read_masks) {
      try {
        const auto m = read_volume(root / entry.m_path);
        const auto fg = std::count_if(m.grid.data().begin(), m.grid.data().end(), [](std::uint16_t v) { return v != 0; });
        st.foreground_fractions.push_back(static_cast<double>(fg) / static_cast<double>(m.grid.size()));
      } catch (const std::exception&) {
        st.unreadable_samples.push_back(entry.index);
      }
    }
  }
  st.mean_accepted_overlap = st.accepted_total == 0 ? 0.0 : overlap_sum / static_cast<double>(st.accepted_total);
  st.min_z_extent = st.accepted_total == 0 ? 0 : zmin;
  st.max_z_extent = zmax;
  for (std::size_t z = 0; z < profiles.size(); ++z) {
    st.distinct_profiles_per_z_rule[z] = static_cast<std::int64_t>(profiles[z].size());
  }
  return st;
}

DatasetStats dataset_stats(const fs::path& manifest_path) {
  return stats_from_manifest(read_manifest(manifest_path), manifest_path.parent_path());
}

namespace {

struct Summary {
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

template <class T>
Summary summarize(const std::vector<T>& values) {
  if (values.empty()) return {};
  Summary s;
  s.min = static_cast<double>(*std::min_element(values.begin(), values.end()));
  s.max = static_cast<double>(*std::max_element(values.begin(), values.end()));
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  return s;
}

}  // namespace

ordered_json stats_to_json(const DatasetStats& st) {
  ordered_json j;
  j["sample_count"] = st.sample_count;
  auto classes = ordered_json::array();
  for (int c = 0; c < kShapeClassCount; ++c) {
    const auto sc = ShapeClass::from_id(c);
    classes.push_back({{"class_id", c},
                       {"name", sc.name()},
                       {"accepted", st.class_histogram[static_cast<std::size_t>(c)]},
                       {"drawn", st.drawn_class_histogram[static_cast<std::size_t>(c)]}});
  }
  j["class_histogram"] = classes;
  j["accepted_counts"] = st.accepted_counts;
  j["accepted_total"] = st.accepted_total;
  j["rejected_total"] = st.rejected_total;
  j["rejection_rate"] = st.rejection_rate();
  j["mean_accepted_overlap"] = st.mean_accepted_overlap;
  j["foreground_fractions"] = st.foreground_fractions;
  const auto fg = summarize(st.foreground_fractions);
  j["foreground_fraction_summary"] = {{"min", fg.min}, {"mean", fg.mean}, {"max", fg.max}};
  j["z_extent"] = {{"min", st.min_z_extent}, {"max", st.max_z_extent}};
  ordered_json profiles;
  for (int z = 0; z < kZRuleCount; ++z) {
    profiles[std::string(z_rule_name(z_rule_from_index(z)))] = st.distinct_profiles_per_z_rule[static_cast<std::size_t>(z)];
  }
  j["distinct_profiles_per_z_rule"] = profiles;
  j["unreadable_samples"] = st.unreadable_samples;
  return j;
}

std::string stats_table(const DatasetStats& st) {
  std::ostringstream os;
  os << "samples: " << st.sample_count << "\n";
  os << "accepted objects: " << st.accepted_total << "  rejected: " << st.rejected_total << "  rejection rate: "
     << std::fixed << std::setprecision(4) << st.rejection_rate() << "\n";
  const auto counts = summarize(st.accepted_counts);
  os << "accepted per sample: min " << std::setprecision(0) << counts.min << "  mean " << std::setprecision(2)
     << counts.mean << "  max " << std::setprecision(0) << counts.max << "\n";
  const auto fg = summarize(st.foreground_fractions);
  os << std::setprecision(4) << "foreground fraction: min " << fg.min << "  mean " << fg.mean << "  max " << fg.max
     << "\n";
  os << "mean accepted overlap ratio: " << std::setprecision(6) << st.mean_accepted_overlap << "\n";
  os << "object z-extent: min " << st.min_z_extent << "  max " << st.max_z_extent << "\n";
  os << "distinct profiles per z-rule:";
  for (int z = 0; z < kZRuleCount; ++z) {
    os << " " << z_rule_name(z_rule_from_index(z)) << "=" << st.distinct_profiles_per_z_rule[static_cast<std::size_t>(z)];
  }
  os << "\n\n";
  os << std::left << std::setw(4) << "id" << std::setw(18) << "class" << std::right << std::setw(10) << "accepted"
     << std::setw(10) << "drawn" << "\n";
  for (int c = 0; c < kShapeClassCount; ++c) {
    os << std::left << std::setw(4) << c << std::setw(18) << ShapeClass::from_id(c).name() << std::right
       << std::setw(10) << st.class_histogram[static_cast<std::size_t>(c)] << std::setw(10)
       << st.drawn_class_histogram[static_cast<std::size_t>(c)] << "\n";
  }
  if (!st.unreadable_samples.empty()) {
    os << "\nunreadable masks: " << st.unreadable_samples.size() << "\n";
  }
  return os.str();
}

}  // namespace primsynth
