#include "quadrant/cli.hpp"

#include "quadrant/errors.hpp"
#include "quadrant/polynomial.hpp"
#include "quadrant/preimage.hpp"
#include "quadrant/sampler.hpp"
#include "quadrant/topology.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <vector>

namespace qatlas::cli {

using nlohmann::json;

namespace {

struct OutputOptions {
  std::string format = "text";
  bool json_flag = false;

  bool as_json() const { return json_flag || format == "json"; }
};

void add_output_options(CLI::App *sub, OutputOptions &o) {
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  sub->add_flag("--json", o.json_flag, "Same as --format json");
}

double parse_decimal(const std::string &s) {
  double v = 0.0;
  const char *end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw CLI::ValidationError("not a finite decimal number: '" + s + "'");
  return v;
}

json poly_json(const SparsePolynomial &p) {
  json terms = json::array();
  for (const auto &t : p.terms())
    terms.push_back(json::array({t.exponents[0], t.exponents[1], t.coefficient.get_str()}));
  const PolyStats s = stats(p);
  return {{"terms", terms},
          {"text", to_string(p)},
          {"total_degree", s.total_degree ? json(*s.total_degree) : json(nullptr)},
          {"monomial_count", s.monomial_count}};
}

json map_json(const PolyMap2 &m) { return {{"component1", poly_json(m.component1)}, {"component2", poly_json(m.component2)}}; }

json report_json(const SamplerReport &r) {
  json j = {{"check", r.check},
            {"checked", r.checked},
            {"failures", r.failures},
            {"min_component_1", r.min_component_1},
            {"min_component_2", r.min_component_2},
            {"max_relative_error", r.max_relative_error},
            {"tolerance", r.tolerance},
            {"ok", r.ok()}};
  j["first_failure_input"] =
      r.first_failure_input ? json::array({r.first_failure_input->u, r.first_failure_input->v}) : json(nullptr);
  j["first_failure_index"] = r.first_failure_index ? json(*r.first_failure_index) : json(nullptr);
  return j;
}

json transversality_json(const TransversalityReport &r) {
  json intervals = json::array();
  for (const auto &h : r.hit_intervals)
    intervals.push_back(json::array({h.begin, h.end}));
  return {{"hit_intervals", intervals},
          {"expected_interval", json::array({r.expected_begin, r.expected_end})},
          {"grid_step", r.grid_step},
          {"max_lateral_deviation", r.max_lateral_deviation},
          {"max_affine_deviation", r.max_affine_deviation},
          {"ok", r.ok}};
}

json linking_json(const LinkingResult &r) {
  return {{"value", r.value},
          {"rounded", r.rounded},
          {"error", r.error()},
          {"loop_segments", r.loop_segments},
          {"circle_segments", r.circle_segments},
          {"ok", r.ok() && std::abs(r.rounded) == 1}};
}

struct Outcome {
  json params;
  json results;
  bool pass = false;
  int failure_code = kCheckFailed;
  std::string text;
};

Outcome run_expand() {
  Outcome o;
  const PolyMap2 f1 = build_f1(), f2 = build_f2(), f = build_theorem_map();
  const bool composition = compose(f2, f1) == f;
  const PolyStats s1 = stats(f.component1), s2 = stats(f.component2);
  const unsigned total_degree = s1.total_degree.value_or(0) + s2.total_degree.value_or(0);
  const std::size_t total_monomials = s1.monomial_count + s2.monomial_count;

  o.params = json::object();
  o.results = {{"f1", map_json(f1)},
               {"f2", map_json(f2)},
               {"f", map_json(f)},
               {"composition_equal", composition},
               {"total_degree", total_degree},
               {"total_monomials", total_monomials}};
  o.pass = composition;

  std::ostringstream t;
  const char *names[] = {"f1", "f2", "f"};
  const PolyMap2 *maps[] = {&f1, &f2, &f};
  for (int k = 0; k < 3; ++k) {
    for (int c = 0; c < 2; ++c) {
      const PolyStats s = stats((*maps[k])[c]);
      t << names[k] << "[" << c + 1 << "] = " << to_string((*maps[k])[c]) << "\n    degree "
        << s.total_degree.value_or(0) << ", " << s.monomial_count << " monomials\n";
    }
  }
  t << "total degree " << total_degree << ", total monomials " << total_monomials << "\n";
  t << "f2 o f1 == f: " << (composition ? "yes" : "NO") << "\n";
  o.text = t.str();
  return o;
}

Outcome run_preimage(double a, double b, double tol) {
  Outcome o;
  o.params = {{"target", json::array({a, b})}, {"tol", tol}};
  SolverConfig cfg;
  cfg.residual_tol = tol;
  const PreimageQuery q{a, b};
  try {
    const PreimageResult r = preimage(q, cfg);
    o.results = {{"x", r.x},
                 {"y", r.y},
                 {"residual", r.residual},
                 {"stage", std::string(to_string(r.stage))},
                 {"newton_iters", r.newton_iters},
                 {"seed_index", r.seed_index}};
    o.pass = r.residual <= tol;
    std::ostringstream t;
    t << std::setprecision(17) << "f(" << r.x << ", " << r.y << ") ~ (" << a << ", " << b << ")\n"
      << std::setprecision(6) << "residual " << r.residual << " (" << to_string(r.stage) << ", seed "
      << r.seed_index << ", " << r.newton_iters << " Newton steps)\n";
    o.text = t.str();
  } catch (const SolverFailure &e) {
    o.results = {{"error", e.what()}, {"best_residual", e.best_residual()}};
    o.pass = false;
    o.failure_code = kSolverFailure;
    o.text = std::string("solver failed: ") + e.what() + "\n";
  }
  return o;
}

void dump_points(const std::string &path, const TubeSpec &t1, const TubeSpec &t2, std::size_t samples) {
  std::ofstream os(path);
  if (!os)
    throw CLI::ValidationError("cannot open dump file '" + path + "'");
  os << std::setprecision(17) << "curve,parameter,x,y,z\n";
  auto row = [&](std::string_view name, double param, Point3 p) {
    os << name << ',' << param << ',' << p.x << ',' << p.y << ',' << p.z << '\n';
  };
  for (const TubeSpec *tube : {&t1, &t2}) {
    const BoundaryLoop loop{matching_loop(tube->disc.variant), tube->M};
    for (std::size_t i = 0; i <= samples; ++i) {
      const double t = loop.length() * static_cast<double>(i) / static_cast<double>(samples);
      row(to_string(loop.variant), t, eval_loop(loop, std::min(t, loop.length())));
    }
  }
  for (const TubeSpec *tube : {&t1, &t2}) {
    const std::string name = "boundary_" + std::string(to_string(tube->disc.variant));
    for (std::size_t i = 0; i <= samples; ++i) {
      const double s = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(samples);
      row(name, s, disc_boundary(tube->disc, s));
    }
  }
}

Outcome run_certify(double A, double B, std::size_t segments, std::size_t grid, const std::string &dump) {
  Outcome o;
  o.params = {{"A", A}, {"B", B}, {"segments", segments}, {"grid", grid}};
  const TubeSpec tubes[] = {make_tube(A, B, DiscVariant::D1), make_tube(A, B, DiscVariant::D2)};

  json pairs = json::array();
  bool pass = true;
  std::ostringstream t;
  t << std::setprecision(10);
  for (const TubeSpec &tube : tubes) {
    const BoundaryLoop loop{matching_loop(tube.disc.variant), tube.M};
    const TransversalityReport tr = transversality_scan(loop, tube, grid);
    const LinkingResult lk = gauss_linking(loop, tube.disc, segments, segments);
    const json lj = linking_json(lk);
    pass = pass && tr.ok && lj["ok"].get<bool>();
    pairs.push_back({{"loop", std::string(to_string(loop.variant))},
                     {"disc", std::string(to_string(tube.disc.variant))},
                     {"transversality", transversality_json(tr)},
                     {"linking", lj},
                     {"expected_sign", expected_linking_sign(loop.variant)}});

    t << to_string(loop.variant) << " vs " << to_string(tube.disc.variant) << ": ";
    if (tr.hit_intervals.size() == 1)
      t << "hit [" << tr.hit_intervals[0].begin << ", " << tr.hit_intervals[0].end << "]";
    else
      t << tr.hit_intervals.size() << " hit intervals";
    t << ", expected (" << tr.expected_begin << ", " << tr.expected_end << "), transversal "
      << (tr.ok ? "ok" : "FAILED") << "; linking " << lk.value << " -> " << lk.rounded << "\n";
  }
  o.results = {{"epsilon", tubes[0].epsilon},
               {"M0", tubes[0].M0},
               {"M", tubes[0].M},
               {"orientation_signs",
                {{"alpha1", expected_linking_sign(LoopVariant::Alpha1)},
                 {"alpha2", expected_linking_sign(LoopVariant::Alpha2)}}},
               {"pairs", pairs}};
  o.pass = pass;
  o.text = t.str();
  if (!dump.empty())
    dump_points(dump, tubes[0], tubes[1], std::min<std::size_t>(segments, 1 << 16));
  return o;
}

std::string report_line(const SamplerReport &r) {
  std::ostringstream t;
  t << std::setprecision(6) << r.check << ": " << r.checked << " checked, " << r.failures << " failures";
  if (r.max_relative_error != 0.0)
    t << ", max error " << r.max_relative_error;
  t << (r.ok() ? "" : "  FAILED") << "\n";
  return t.str();
}

Outcome run_sample(std::size_t count, std::uint64_t seed, double range) {
  Outcome o;
  o.params = {{"count", count}, {"seed", seed}, {"range", range}};
  const SamplerReport r = check_positivity({count, seed, range});
  o.results = {{"positivity", report_json(r)}};
  o.pass = r.ok();
  std::ostringstream t;
  t << report_line(r) << std::setprecision(6) << "min components " << r.min_component_1 << ", "
    << r.min_component_2 << "\n";
  o.text = t.str();
  return o;
}

inline constexpr std::size_t kGluingGrid = 1001;

Outcome run_identities(std::size_t count, std::uint64_t seed, double range) {
  Outcome o;
  o.params = {{"count", count}, {"seed", seed}, {"range", range}};
  const SamplerConfig cfg{count, seed, range};
  const SamplerReport reports[] = {check_f2_equals_h_g(cfg), check_g_psi_equals_phi(cfg), check_phi_bound(cfg),
                                   check_mu_gluing(kGluingGrid)};
  o.results = json::object();
  o.pass = true;
  for (const auto &r : reports) {
    o.results[r.check] = report_json(r);
    o.pass = o.pass && r.ok();
    o.text += report_line(r);
  }
  return o;
}

} // namespace

int run(std::span<const std::string> args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Polynomial map onto the open quadrant: expansion, preimages and certificates", "quadrant_atlas"};
  app.require_subcommand(1);

  OutputOptions expand_out, pre_out, cert_out, sample_out, id_out;

  auto *expand = app.add_subcommand("expand", "Print f1, f2, f and check f = f2 o f1");
  add_output_options(expand, expand_out);

  auto *pre = app.add_subcommand("preimage", "Find (x, y) with f(x, y) = (a, b)");
  std::string target;
  double tol = SolverConfig{}.residual_tol;
  pre->add_option("--target", target, "Target as A,B")->required();
  pre->add_option("--tol", tol, "Relative residual tolerance")->check(CLI::PositiveNumber);
  add_output_options(pre, pre_out);

  auto *cert = app.add_subcommand("certify", "Transversality scans and linking numbers");
  double A = 1.0, B = 2.0;
  std::size_t segments = 4096, grid = 100000;
  std::string dump;
  cert->add_option("--A", A, "Disc radius")->required();
  cert->add_option("--B", B, "Height scale, B >= A")->required();
  cert->add_option("--segments", segments, "Gauss integral segments per curve")->check(CLI::Range(256, 1 << 20));
  cert->add_option("--grid", grid, "Transversality samples")->check(CLI::Range(1000, 100000000));
  cert->add_option("--dump-points", dump, "Write loop and boundary samples as CSV");
  add_output_options(cert, cert_out);

  auto *smp = app.add_subcommand("sample", "Positivity of f on random and exact grid points");
  std::size_t count = 0;
  std::uint64_t seed = 0;
  double range = SamplerConfig{}.range;
  smp->add_option("--count", count, "Number of samples")->required()->check(CLI::PositiveNumber);
  smp->add_option("--seed", seed, "64-bit seed")->required();
  smp->add_option("--range", range, "Half-width of the sampling square")->check(CLI::PositiveNumber);
  add_output_options(smp, sample_out);

  auto *ids = app.add_subcommand("identities", "f2 = h o g, g o psi = phi, phi bound, mu gluing");
  ids->add_option("--count", count, "Samples per identity")->required()->check(CLI::PositiveNumber);
  ids->add_option("--seed", seed, "64-bit seed")->required();
  ids->add_option("--range", range, "Sampling range for f2 = h o g")->check(CLI::PositiveNumber);
  add_output_options(ids, id_out);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  double a = 0.0, b = 0.0;
  try {
    app.parse(reversed);
    if (pre->parsed()) {
      const auto comma = target.find(',');
      if (comma == std::string::npos)
        throw CLI::ValidationError("--target expects A,B");
      a = parse_decimal(target.substr(0, comma));
      b = parse_decimal(target.substr(comma + 1));
      if (!(a > 0.0) || !(b > 0.0))
        throw CLI::ValidationError("--target must lie in the open quadrant (A > 0, B > 0)");
    }
    if (cert->parsed() && !(B >= A && A > 0.0))
      throw CLI::ValidationError("certify requires B >= A > 0");
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kInvalidArguments;
  }

  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  std::string name;
  const OutputOptions *fmt = nullptr;
  try {
    if (expand->parsed()) {
      name = "expand", fmt = &expand_out, o = run_expand();
    } else if (pre->parsed()) {
      name = "preimage", fmt = &pre_out, o = run_preimage(a, b, tol);
    } else if (cert->parsed()) {
      name = "certify", fmt = &cert_out, o = run_certify(A, B, segments, grid, dump);
    } else if (smp->parsed()) {
      name = "sample", fmt = &sample_out, o = run_sample(count, seed, range);
    } else {
      name = "identities", fmt = &id_out, o = run_identities(count, seed, range);
    }
  } catch (const CLI::ValidationError &e) {
    err << e.what() << "\n";
    return kInvalidArguments;
  } catch (const DomainError &e) {
    err << e.what() << "\n";
    return kInvalidArguments;
  }
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();

  if (fmt->as_json()) {
    const json report = {{"subcommand", name},  {"params", o.params},          {"results", o.results},
                         {"pass", o.pass},      {"wall_time_ms", elapsed},     {"version", kFormatVersion}};
    out << report.dump(2) << "\n";
  } else {
    out << o.text << (o.pass ? "PASS" : "FAIL") << " (" << elapsed << " ms)\n";
  }
  return o.pass ? kPass : o.failure_code;
}

} // namespace qatlas::cli
