// Command-line front end: dataset generation, density estimation, slicing,
// distances and the experiment sweeps.
//
// Exit codes: 0 success, 1 usage or input error, 2 verification failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mpdist/io.hpp"
#include "mpdist/mpdist.hpp"

namespace {

using namespace mpdist;
using nlohmann::json;

constexpr int kVerificationFailed = 2;

struct Globals {
  std::uint64_t seed = 0;
  int grid_size = 20;
  int degree = 0;
  std::string out = "csv";
  unsigned threads = 0;

  MatchConfig match(bool normalize = true) const {
    MatchConfig cfg;
    cfg.grid_size = grid_size;
    cfg.degree = degree;
    cfg.normalize = normalize;
    cfg.threads = threads;
    return cfg;
  }
  bool json_out() const { return out == "json"; }
};

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return detail::format_double(v);
}

json num_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Reads a cloud and makes sure it carries densities.
PointCloud load_cloud(const std::string& path, std::optional<std::size_t> k) {
  PointCloud cloud = read_csv(path);
  if (k) return knn_density(cloud, *k);
  if (!cloud.has_densities()) {
    throw std::invalid_argument(path + " has no density column; pass --k to estimate one");
  }
  return cloud;
}

void emit_cloud(const PointCloud& cloud, const std::string& output) {
  if (output.empty() || output == "-") {
    write_csv(cloud, std::cout);
  } else {
    write_csv(cloud, output);
  }
}

void emit_barcode(const Barcode& b, const Globals& g) {
  if (g.json_out()) {
    std::cout << to_json(b).dump() << '\n';
    return;
  }
  std::cout << "birth,death\n";
  for (const auto& bar : b.canonical().bars) std::cout << num(bar.birth) << ',' << num(bar.death) << '\n';
}

void emit_sweep(const SweepResult& s, const Globals& g) {
  if (g.json_out()) {
    std::cout << to_json(s).dump(2) << '\n';
  } else {
    s.write_csv(std::cout);
  }
}

TwoCircleSweepSpec circle_spec(const std::string& vary, double radius, double separation,
                               std::vector<double> values, std::vector<double> refs, std::size_t n, std::size_t k,
                               std::uint64_t seed) {
  TwoCircleSweepSpec spec;
  if (vary == "radius") {
    spec.axis = CircleSweepAxis::Radius;
    if (values.empty()) {
      for (int i = 1; i <= 30; ++i) values.push_back(0.2 * i);
    }
    if (refs.empty()) refs = {6.0};
  } else {
    if (values.empty()) {
      for (int i = 1; i <= 19; ++i) values.push_back(0.5 * i);
    }
    if (refs.empty()) refs = {10.0};
  }
  spec.radius = radius;
  spec.separation = separation;
  spec.values = std::move(values);
  spec.references = std::move(refs);
  spec.points_per_circle = n;
  spec.k = k;
  spec.seed = seed;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-parameter persistence and matching distances for planar point clouds"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--grid-size", g.grid_size, "Angles and offsets per axis of the line grid")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--degree", g.degree, "Homology degree")->check(CLI::IsMember({0, 1}))->capture_default_str();
  app.add_option("--out", g.out, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0: all cores)")->capture_default_str();

  // generate
  auto* gen = app.add_subcommand("generate", "Write a dataset as CSV");
  std::string gen_kind = "two-circles", gen_output;
  double gen_x = 0.0, gen_y = 3.0, gen_radius = 3.0, gen_sep = 3.0, gen_noise_frac = 0.0, gen_noise_mag = 0.0;
  std::size_t gen_n = 50;
  std::optional<std::size_t> gen_k;
  gen->add_option("--kind", gen_kind)->check(CLI::IsMember({"three-point", "two-circles"}))->capture_default_str();
  gen->add_option("--x", gen_x, "Three-point: x of C")->capture_default_str();
  gen->add_option("--y", gen_y, "Three-point: y of C")->capture_default_str();
  gen->add_option("--radius", gen_radius)->capture_default_str();
  gen->add_option("--separation", gen_sep)->capture_default_str();
  gen->add_option("--points-per-circle", gen_n)->capture_default_str();
  gen->add_option("--noise-fraction", gen_noise_frac)->capture_default_str();
  gen->add_option("--noise-magnitude", gen_noise_mag)->capture_default_str();
  gen->add_option("--k", gen_k, "Attach k-NN densities (three-point datasets default to 1,2,1)");
  gen->add_option("-o,--output", gen_output, "Output path (default stdout)");

  // density
  auto* dens = app.add_subcommand("density", "Attach k-NN or closest-pair densities to a CSV dataset");
  std::string dens_in, dens_output;
  std::optional<std::size_t> dens_k;
  bool dens_closest = false;
  dens->add_option("input", dens_in)->required()->check(CLI::ExistingFile);
  dens->add_option("--k", dens_k, "Distance to the k-th nearest neighbour");
  dens->add_flag("--closest-pair", dens_closest, "1 for points in a closest pair, 2 otherwise");
  dens->add_option("-o,--output", dens_output, "Output path (default stdout)");

  // slice
  auto* sl = app.add_subcommand("slice", "Fibered barcode of a dataset along one line");
  std::string sl_in, sl_norm, sl_dump;
  double sl_angle = 45.0, sl_offset = 0.0;
  std::optional<std::size_t> sl_k;
  std::optional<double> sl_cap;
  sl->add_option("input", sl_in)->required()->check(CLI::ExistingFile);
  sl->add_option("--angle", sl_angle, "Degrees, strictly between 0 and 90")->capture_default_str();
  sl->add_option("--offset", sl_offset, "Signed offset along the upper-left normal")->capture_default_str();
  sl->add_option("--k", sl_k, "Estimate k-NN densities instead of reading them");
  sl->add_option("--scale-cap", sl_cap, "Drop simplices longer than this");
  sl->add_option("--normalize-with", sl_norm, "Normalize jointly with this dataset first")->check(CLI::ExistingFile);
  sl->add_option("--dump-bifiltration", sl_dump, "Also write the bifiltration as text");

  // bottleneck
  auto* bn = app.add_subcommand("bottleneck", "Bottleneck distance between two barcode JSON files");
  std::string bn_a, bn_b;
  bn->add_option("first", bn_a)->required()->check(CLI::ExistingFile);
  bn->add_option("second", bn_b)->required()->check(CLI::ExistingFile);

  // matching-distance
  auto* md = app.add_subcommand("matching-distance", "Grid-approximated matching distance between two datasets");
  std::string md_a, md_b;
  bool md_no_norm = false, md_argmax = false;
  std::optional<std::size_t> md_k;
  md->add_option("first", md_a)->required()->check(CLI::ExistingFile);
  md->add_option("second", md_b)->required()->check(CLI::ExistingFile);
  md->add_flag("--no-normalize", md_no_norm, "Use raw grades");
  md->add_flag("--argmax-line", md_argmax, "Also print the line attaining the maximum");
  md->add_option("--k", md_k, "Estimate k-NN densities instead of reading them");

  // sweep-three-point
  auto* s3 = app.add_subcommand("sweep-three-point", "d_M between X_{r,s} and X_{t,s} over r and t");
  double s3_s = 3.0;
  std::vector<double> s3_r, s3_t;
  s3->add_option("--s", s3_s, "Height of C")->capture_default_str();
  s3->add_option("--r-values", s3_r, "Default 0, 0.184, ..., 3.128")->delimiter(',');
  s3->add_option("--t-values", s3_t, "Default 0, 0.184, ..., 3.128")->delimiter(',');

  // two-circle family (sweep, noise)
  std::string tc_vary = "separation";
  double tc_radius = 3.0, tc_sep = 3.0, tc_noise_frac = 0.0, tc_noise_mag = 0.0;
  std::vector<double> tc_values, tc_refs;
  std::size_t tc_n = 50, tc_k = 20;
  auto add_circle_options = [&](CLI::App* sub) {
    sub->add_option("--vary", tc_vary)->check(CLI::IsMember({"separation", "radius"}))->capture_default_str();
    sub->add_option("--radius", tc_radius, "Fixed radius when varying separation")->capture_default_str();
    sub->add_option("--separation", tc_sep, "Fixed separation when varying radius")->capture_default_str();
    sub->add_option("--values", tc_values, "Varied parameter (default 0.5..9.5, or 0.2..6 for radius)")
        ->delimiter(',');
    sub->add_option("--references", tc_refs, "Compared against every smaller value (default 10, or 6)")
        ->delimiter(',');
    sub->add_option("--points-per-circle", tc_n)->capture_default_str();
    sub->add_option("--k", tc_k, "k of the k-NN density")->capture_default_str();
  };
  auto* s2 = app.add_subcommand("sweep-two-circles", "d_M between two-circle datasets");
  add_circle_options(s2);
  s2->add_option("--noise-fraction", tc_noise_frac)->capture_default_str();
  s2->add_option("--noise-magnitude", tc_noise_mag)->capture_default_str();

  auto* nr = app.add_subcommand("noise-robustness", "Clean vs noisy two-circle sweeps, Spearman correlation");
  add_circle_options(nr);
  std::vector<double> nr_fractions{0.2, 0.4};
  std::optional<double> nr_mag;
  double nr_min_corr = 0.9;
  nr->add_option("--fractions", nr_fractions)->delimiter(',')->capture_default_str();
  nr->add_option("--magnitude", nr_mag, "Noise disk radius (default radius / 10)");
  nr->add_option("--min-correlation", nr_min_corr, "Exit 2 below this")->capture_default_str();

  // verify-proposition
  auto* vp = app.add_subcommand("verify-proposition", "Randomized exact-zero check of the three-point and polygon results");
  std::size_t vp_trials = 100, vp_poly = 5;
  vp->add_option("--trials", vp_trials)->check(CLI::PositiveNumber)->capture_default_str();
  vp->add_option("--polygon-trials", vp_poly, "Per polygon size 3..6")->capture_default_str();

  // corollary-mc
  auto* cm = app.add_subcommand("corollary-mc", "Monte Carlo estimate of the zero-distance probability");
  double cm_r = 1.0, cm_d = 3.0, cm_tol = 0.05, cm_zero = 1e-9;
  std::size_t cm_trials = 1000;
  cm->add_option("--r", cm_r)->capture_default_str();
  cm->add_option("--d", cm_d)->capture_default_str();
  cm->add_option("--trials", cm_trials)->check(CLI::PositiveNumber)->capture_default_str();
  cm->add_option("--tolerance", cm_tol, "Exit 2 if |empirical - predicted| exceeds this")->capture_default_str();
  cm->add_option("--zero-tolerance", cm_zero, "Distances at or below this count as zero")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      PointCloud cloud;
      if (gen_kind == "three-point") {
        cloud = three_point(gen_x, gen_y);
      } else {
        cloud = two_circles(CircleSpec{gen_radius, gen_sep, gen_n, g.seed});
        cloud = add_noise(cloud, gen_noise_frac, gen_noise_mag, detail::Rng::derive(g.seed, 1));
      }
      if (gen_k) {
        cloud = knn_density(cloud, *gen_k);
      } else if (gen_kind == "three-point") {
        cloud = set_density(cloud, {1.0, 2.0, 1.0});
      }
      emit_cloud(cloud, gen_output);
    } else if (dens->parsed()) {
      if (dens_k.has_value() == dens_closest) throw CLI::ValidationError("density", "pass exactly one of --k, --closest-pair");
      const PointCloud cloud = read_csv(dens_in);
      emit_cloud(dens_k ? knn_density(cloud, *dens_k) : closest_pair_density(cloud), dens_output);
    } else if (sl->parsed()) {
      const Line line(sl_angle, sl_offset);
      BifilteredComplex bf = build_density_rips(load_cloud(sl_in, sl_k), g.degree + 1, sl_cap);
      if (!sl_norm.empty()) {
        bf = normalize_pair(bf, build_density_rips(load_cloud(sl_norm, sl_k), g.degree + 1, sl_cap)).first;
      }
      if (!sl_dump.empty()) {
        std::ofstream out(sl_dump);
        if (!out) throw std::runtime_error("cannot open " + sl_dump);
        dump(bf, out);
      }
      emit_barcode(fibered_barcode(bf, line, g.degree), g);
    } else if (bn->parsed()) {
      const double d = bottleneck(read_barcode(bn_a), read_barcode(bn_b));
      if (g.json_out()) {
        std::cout << json{{"bottleneck", num_json(d)}}.dump() << '\n';
      } else {
        std::cout << num(d) << '\n';
      }
    } else if (md->parsed()) {
      const MatchConfig cfg = g.match(!md_no_norm);
      const MatchResult m = matching_distance(complex_for_degree(load_cloud(md_a, md_k), g.degree),
                                              complex_for_degree(load_cloud(md_b, md_k), g.degree), cfg);
      if (g.json_out()) {
        std::cout << to_json(m).dump(2) << '\n';
      } else {
        std::cout << num(m.distance) << '\n';
        if (md_argmax && m.argmax_line) {
          std::cout << "argmax_line angle_deg=" << num(m.argmax_line->angle_deg())
                    << " offset=" << num(m.argmax_line->offset()) << '\n';
        }
      }
    } else if (s3->parsed()) {
      if (s3_r.empty()) s3_r = default_three_point_values();
      if (s3_t.empty()) s3_t = default_three_point_values();
      emit_sweep(three_point_sweep(s3_s, s3_r, s3_t, g.match()), g);
    } else if (s2->parsed()) {
      TwoCircleSweepSpec spec = circle_spec(tc_vary, tc_radius, tc_sep, tc_values, tc_refs, tc_n, tc_k, g.seed);
      spec.noise_fraction = tc_noise_frac;
      spec.noise_magnitude = tc_noise_mag;
      emit_sweep(two_circle_sweep(spec, g.match()), g);
    } else if (nr->parsed()) {
      const TwoCircleSweepSpec spec = circle_spec(tc_vary, tc_radius, tc_sep, tc_values, tc_refs, tc_n, tc_k, g.seed);
      const double magnitude = nr_mag.value_or(tc_radius / 10.0);
      const NoiseReport rep = noise_robustness(spec, nr_fractions, magnitude, g.match());
      bool ok = true;
      for (const auto& c : rep.noisy) ok = ok && c.spearman >= nr_min_corr;
      if (g.json_out()) {
        json j{{"clean", to_json(rep.clean)}, {"noisy", json::array()}, {"passed", ok}};
        for (const auto& c : rep.noisy) {
          j["noisy"].push_back({{"fraction", c.fraction}, {"spearman", num_json(c.spearman)}, {"sweep", to_json(c.sweep)}});
        }
        std::cout << j.dump(2) << '\n';
      } else {
        std::cout << "fraction,spearman\n";
        for (const auto& c : rep.noisy) std::cout << num(c.fraction) << ',' << num(c.spearman) << '\n';
      }
      if (!ok) return kVerificationFailed;
    } else if (vp->parsed()) {
      const PropositionReport rep = verify_proposition(vp_trials, g.seed, g.match(), vp_poly);
      if (g.json_out()) {
        json failures = json::array();
        for (const auto& f : rep.failures) failures.push_back({{"label", f.label}, {"matching_distance", f.matching_distance}});
        std::cout << json{{"in_hypothesis", rep.in_hypothesis},
                          {"in_hypothesis_zero", rep.in_hypothesis_zero},
                          {"polygon_trials", rep.polygon_trials},
                          {"polygon_zero", rep.polygon_zero},
                          {"out_of_hypothesis", rep.out_of_hypothesis},
                          {"out_of_hypothesis_nonzero", rep.out_of_hypothesis_nonzero},
                          {"failures", failures},
                          {"passed", rep.passed()}}
                         .dump(2)
                  << '\n';
      } else {
        std::cout << "check,trials,zero\n"
                  << "three-point," << rep.in_hypothesis << ',' << rep.in_hypothesis_zero << '\n'
                  << "polygon," << rep.polygon_trials << ',' << rep.polygon_zero << '\n'
                  << "out-of-hypothesis," << rep.out_of_hypothesis << ','
                  << rep.out_of_hypothesis - rep.out_of_hypothesis_nonzero << '\n';
        for (const auto& f : rep.failures) {
          std::cerr << "nonzero " << f.label << ": " << num(f.matching_distance) << '\n';
        }
      }
      if (!rep.passed()) return kVerificationFailed;
    } else if (cm->parsed()) {
      const CorollaryReport rep = corollary_montecarlo(cm_r, cm_d, cm_trials, g.seed, g.match(), cm_zero);
      const bool ok = std::abs(rep.empirical - rep.predicted) <= cm_tol;
      if (g.json_out()) {
        std::cout << json{{"trials", rep.trials},
                          {"empirical", rep.empirical},
                          {"geometric", rep.geometric},
                          {"predicted", rep.predicted},
                          {"agreement", rep.agreement},
                          {"passed", ok}}
                         .dump(2)
                  << '\n';
      } else {
        std::cout << "trials,empirical,geometric,predicted,agreement\n"
                  << rep.trials << ',' << num(rep.empirical) << ',' << num(rep.geometric) << ','
                  << num(rep.predicted) << ',' << rep.agreement << '\n';
      }
      if (!ok) return kVerificationFailed;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
