#include "ctinv/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ctinv/error.hpp"
#include "ctinv/forward.hpp"
#include "ctinv/generalct.hpp"
#include "ctinv/io.hpp"
#include "ctinv/reconstruct.hpp"
#include "ctinv/semianalytic.hpp"

namespace ctinv::cli {

namespace {

using nlohmann::json;

json complex_list(const std::vector<cplx>& v) {
  json out = json::array();
  for (cplx z : v) out.push_back({z.real(), z.imag()});
  return out;
}

json report_json(const SolveReport& r) {
  json j;
  j["converged"] = r.converged;
  j["zero_limit"] = r.zero_limit;
  j["iterations"] = r.iterations;
  j["residual_norm"] = r.residual_norm;
  j["start"] = complex_list(r.start.values());
  j["solution"] = complex_list(r.solution.values());
  j["diagnostics"] = r.diagnostics;
  if (!r.condition_history.empty()) j["condition_history"] = r.condition_history;
  if (!r.alternatives.empty()) {
    json alts = json::array();
    for (const Root& a : r.alternatives) {
      alts.push_back({{"solution", complex_list(a.solution.values())},
                      {"residual_norm", a.residual_norm},
                      {"distance_from_start", a.distance_from_start}});
    }
    j["alternatives"] = alts;
  }
  return j;
}

void write_json(const std::string& path, const json& j, std::ostream& out) {
  if (path.empty()) return;
  if (path == "-") {
    out << j.dump(2) << '\n';
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot open '" + path + "' for writing");
  os << j.dump(2) << '\n';
}

void emit_potential(const std::string& path, const io::PotentialFile& file, std::ostream& out) {
  if (path == "-") {
    io::write_potential(out, file);
  } else {
    io::save(path, file);
  }
}

void emit_phase_shifts(const std::string& path, const io::PhaseShiftFile& file, std::ostream& out) {
  if (path == "-") {
    io::write_phase_shifts(out, file);
  } else {
    io::save(path, file);
  }
}

// "re,im" or "re".
cplx parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw InputError("cannot parse complex value '" + s + "' (expected re,im)");
  }
}

struct GridFlags {
  double min = 0.05;
  double max = 25.0;
  std::size_t n = 500;
  double tail_max = 0.0;
  double tail_step = 0.1;

  void add(CLI::App& app) {
    app.add_option("--grid-min", min, "first reconstruction point (x = k r)")->capture_default_str();
    app.add_option("--grid-max", max, "last point of the uniform zone")->capture_default_str();
    app.add_option("--grid-n", n, "points in the uniform zone")->capture_default_str();
    app.add_option("--tail-max", tail_max, "extend the grid with a coarse zone up to this x");
    app.add_option("--tail-step", tail_step, "spacing of the coarse zone")->capture_default_str();
  }

  RadialGrid build() const {
    RadialGrid g = RadialGrid::uniform(min, max, n);
    if (tail_max > max) g = RadialGrid::with_tail(g, tail_max, tail_step);
    return g;
  }
};

struct SolverFlags {
  SolverOptions options;
  std::string form = "tangent";
  std::vector<std::string> init;

  void add(CLI::App& app) {
    app.add_option("--tol", options.tol, "residual tolerance (max norm)")->capture_default_str();
    app.add_option("--max-iter", options.max_iter, "Newton iteration limit")->capture_default_str();
    app.add_option("--form", form, "general residual form")
        ->check(CLI::IsMember({"smatrix", "tangent"}))
        ->capture_default_str();
    app.add_option("--multistart", options.multistart, "extra perturbed starts")->capture_default_str();
    app.add_option("--seed", options.seed, "multi-start seed")->capture_default_str();
    app.add_option("--init", init,
                   "starting L per channel as re,im (repeat once per channel; regression mode)");
  }

  SolverOptions build() const {
    SolverOptions o = options;
    o.form = form == "smatrix" ? ResidualForm::SMatrix : ResidualForm::Tangent;
    if (!init.empty()) {
      std::vector<cplx> v;
      for (const std::string& s : init) v.push_back(parse_complex(s));
      o.initial = std::move(v);
    }
    return o;
  }
};

// --- invert ---------------------------------------------------------------

struct InvertArgs {
  std::string input;
  std::string mode = "auto";
  std::string output = "-";
  std::string report;
  bool degrees = false;
  bool with_origin = false;
  GridFlags grid;
  SolverFlags solver;
};

int cmd_invert(const InvertArgs& a, std::ostream& out, std::ostream& err) {
  const io::PhaseShiftFile file = io::load_phase_shifts(a.input, a.degrees);
  const PhaseShiftSet set = file.to_set();
  const RadialGrid grid = a.grid.build();
  const SolverOptions options = a.solver.build();
  const Parity parity = set.parity();

  std::string mode = a.mode;
  if (mode == "auto") mode = parity == Parity::Mixed ? "general" : "semianalytic";
  if (mode == "semianalytic" && parity == Parity::Mixed) {
    err << "invert: mode semianalytic needs channels of one parity; input is mixed\n";
    return kUsage;
  }
  if (mode == "approximate" && parity != Parity::Mixed) {
    err << "invert: mode approximate needs mixed parity; input is " << to_string(parity) << '\n';
    return kUsage;
  }

  json report;
  report["mode"] = mode;
  report["channels"] = set.ls();
  report["deltas"] = complex_list(set.deltas());

  bool converged = false;
  PotentialCurve curve;
  if (mode == "approximate") {
    const generalct::ApproximateReport r = generalct::solve_approximate(set, options);
    report["even"] = report_json(*r.even);
    report["odd"] = report_json(*r.odd);
    converged = r.even->converged && r.odd->converged;
    if (converged) {
      curve = reconstruct::potential(r.even->solution.values(), r.even_set.ls(), grid) +
              reconstruct::potential(r.odd->solution.values(), r.odd_set.ls(), grid);
    }
  } else {
    const SolveReport r = mode == "general" ? generalct::solve_general(set, options)
                                            : semianalytic::solve_parity(set, options);
    report["solve"] = report_json(r);
    converged = r.converged;
    if (converged) curve = reconstruct::potential(r.solution.values(), set.ls(), grid);
  }
  report["converged"] = converged;

  if (!converged) {
    write_json(a.report.empty() ? std::string("-") : a.report, report, err);
    err << "invert: solver did not converge; best iterate reported\n";
    return kSolverFailure;
  }
  report["warnings"] = curve.warnings;

  io::Metadata meta = file.meta;
  meta.generator = "ctinv invert --mode " + mode;
  io::PotentialFile pf = io::PotentialFile::from_curve(curve, meta);
  if (a.with_origin) {
    pf.rows.insert(pf.rows.begin(), {0.0, extrapolate_below(curve, 0.0), PointFlag::Extrapolated});
  }
  emit_potential(a.output, pf, out);
  write_json(a.report, report, out);
  for (const std::string& w : curve.warnings) err << "warning: " << w << '\n';
  return kOk;
}

// --- synth ----------------------------------------------------------------

struct SynthArgs {
  std::string model = "gaussian";
  double depth = -1.0;
  double depth_im = 0.0;
  double range = 2.0;
  double diffuseness = 0.5;
  int lmax = 4;
  std::vector<int> channels;
  double x_max = 30.0;
  std::optional<double> energy;
  std::optional<double> k;
  std::string label;
  std::string output = "-";
  std::string potential_out;
  GridFlags grid;
};

int cmd_synth(const SynthArgs& a, std::ostream& out, std::ostream&) {
  forward::Model m;
  m.kind = forward::parse_model_kind(a.model);
  m.depth = {a.depth, a.depth_im};
  m.range = a.range;
  m.diffuseness = a.diffuseness;
  if (!(m.range > 0.0)) throw InputError("synth: --range must be positive");
  if (m.kind == forward::Model::Kind::WoodsSaxon && !(m.diffuseness > 0.0)) {
    throw InputError("synth: --diffuseness must be positive");
  }
  std::vector<int> ls = a.channels;
  if (ls.empty()) {
    if (a.lmax < 0) throw InputError("synth: --lmax must be non-negative");
    for (int l = 0; l <= a.lmax; ++l) ls.push_back(l);
  }

  const forward::ForwardResult fr = forward::phase_shifts(m, ls, a.x_max);
  io::Metadata meta;
  meta.energy_mev = a.energy;
  meta.k_per_fm = a.k;
  meta.label = a.label;
  meta.generator = "ctinv synth " + m.describe();
  emit_phase_shifts(a.output, io::PhaseShiftFile::from_set(fr.as_set(), meta), out);

  if (!a.potential_out.empty()) {
    const RadialGrid grid = a.grid.build();
    PotentialCurve curve;
    curve.grid = grid;
    for (double x : grid.points()) curve.q.push_back(m(x));
    curve.flags.assign(grid.size(), PointFlag::Clean);
    emit_potential(a.potential_out, io::PotentialFile::from_curve(curve, meta), out);
  }
  return kOk;
}

// --- check ----------------------------------------------------------------

struct CheckArgs {
  std::string potential;
  std::string reference;
  bool degrees = false;
  double threshold = 1e-3;
  double x_max = 0.0;
  std::string json_out;
};

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream&) {
  const PotentialCurve curve = io::load_potential(a.potential).to_curve();
  const io::PhaseShiftFile ref = io::load_phase_shifts(a.reference, a.degrees);
  const PhaseShiftSet set = ref.to_set();
  const double x_max = a.x_max > 0.0 ? a.x_max : curve.grid.back() + 5.0;
  if (x_max <= curve.grid.front() + 2.5) throw InputError("check: --x-max too small");

  const CurveInterpolator q(curve);
  const double h = std::min(curve.grid.min_spacing(), forward::kMaxStep);
  const forward::ForwardResult fr =
      forward::phase_shifts([&](double x) { return q(x); }, set.ls(), x_max, h);

  json j;
  j["channels"] = json::array();
  double max_delta = 0.0, max_xi = 0.0;
  out << "l,re_delta,eta,Delta,Xi\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    const forward::PhaseResult& r = fr.channels[i];
    const cplx orig = set[i].delta;
    const double d = forward::phase_difference(r.delta.real(), orig.real());
    const double xi = std::abs(r.eta - elasticity(orig));
    max_delta = std::max(max_delta, d);
    max_xi = std::max(max_xi, xi);
    out << r.l << ',' << io::format_number(r.delta.real()) << ',' << io::format_number(r.eta) << ','
        << io::format_number(d) << ',' << io::format_number(xi) << '\n';
    j["channels"].push_back({{"l", r.l},
                             {"delta", {r.delta.real(), r.delta.imag()}},
                             {"eta", r.eta},
                             {"Delta", d},
                             {"Xi", xi}});
  }
  out << "max Delta " << io::format_number(max_delta) << ", max Xi " << io::format_number(max_xi)
      << ", threshold " << io::format_number(a.threshold) << '\n';
  j["max_Delta"] = max_delta;
  j["max_Xi"] = max_xi;
  j["threshold"] = a.threshold;
  write_json(a.json_out, j, out);
  return max_delta <= a.threshold && max_xi <= a.threshold ? kOk : kAboveThreshold;
}

// --- combine --------------------------------------------------------------

struct CombineArgs {
  std::string input;
  std::string output = "-";
  bool degrees = false;
};

int cmd_combine(const CombineArgs& a, std::ostream& out, std::ostream&) {
  const io::SpinPairFile in = io::load_spin_pairs(a.input, a.degrees);
  std::vector<Channel> ch;
  for (const io::SpinPairRecord& r : in.records) {
    const cplx minus = r.delta_minus.value_or(cplx(0.0));
    ch.push_back({r.l, generalct::combine_spin_orbit(r.delta_plus, minus, r.l)});
  }
  io::Metadata meta = in.meta;
  meta.generator = "ctinv combine";
  emit_phase_shifts(a.output, io::PhaseShiftFile::from_set(PhaseShiftSet(std::move(ch)), meta), out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fixed-energy inverse scattering: phase shifts to potentials and back"};
  app.require_subcommand(1);

  InvertArgs inv;
  CLI::App* invert = app.add_subcommand("invert", "phase shifts -> potential");
  invert->add_option("input", inv.input, "phase-shift CSV")->required();
  invert->add_option("--mode", inv.mode, "semianalytic, general, approximate or auto")
      ->check(CLI::IsMember({"auto", "semianalytic", "general", "approximate"}))
      ->capture_default_str();
  invert->add_option("-o,--output", inv.output, "potential CSV ('-' for stdout)")->capture_default_str();
  invert->add_option("--report", inv.report, "solve report JSON ('-' for stdout)");
  invert->add_flag("--degrees", inv.degrees, "input angles are in degrees");
  invert->add_flag("--with-origin", inv.with_origin, "add an extrapolated x = 0 row");
  inv.grid.add(*invert);
  inv.solver.add(*invert);

  SynthArgs syn;
  CLI::App* synth = app.add_subcommand("synth", "model potential -> phase shifts");
  synth->add_option("--model", syn.model, "gaussian, woods-saxon or square-well")
      ->check(CLI::IsMember({"gaussian", "woods-saxon", "square-well"}))
      ->capture_default_str();
  synth->add_option("--depth", syn.depth, "real part of the strength (q units)")->capture_default_str();
  synth->add_option("--depth-im", syn.depth_im, "imaginary part of the strength")->capture_default_str();
  synth->add_option("--range", syn.range, "width or radius in x")->capture_default_str();
  synth->add_option("--diffuseness", syn.diffuseness, "Woods-Saxon diffuseness")->capture_default_str();
  synth->add_option("--lmax", syn.lmax, "channels 0..lmax")->capture_default_str();
  synth->add_option("--channels", syn.channels, "explicit channel list")->delimiter(',');
  synth->add_option("--x-max", syn.x_max, "integration range")->capture_default_str();
  synth->add_option("--energy", syn.energy, "metadata: energy in MeV");
  synth->add_option("--k", syn.k, "metadata: wavenumber in 1/fm");
  synth->add_option("--label", syn.label, "metadata label");
  synth->add_option("-o,--output", syn.output, "phase-shift CSV ('-' for stdout)")->capture_default_str();
  synth->add_option("--potential-out", syn.potential_out, "also write the sampled model potential");
  syn.grid.add(*synth);

  CheckArgs chk;
  CLI::App* check = app.add_subcommand("check", "forward-solve a potential against reference phase shifts");
  check->add_option("potential", chk.potential, "potential CSV")->required();
  check->add_option("reference", chk.reference, "phase-shift CSV")->required();
  check->add_flag("--degrees", chk.degrees, "reference angles are in degrees");
  check->add_option("--threshold", chk.threshold, "pass limit for max Delta and max Xi")
      ->capture_default_str();
  check->add_option("--x-max", chk.x_max, "integration range (default: last potential point + 5)");
  check->add_option("--json", chk.json_out, "write the check as JSON ('-' for stdout)");

  CombineArgs cmb;
  CLI::App* combine = app.add_subcommand("combine", "spin-orbit pairs -> combined phase shifts");
  combine->add_option("input", cmb.input, "CSV with delta_plus / delta_minus columns")->required();
  combine->add_option("-o,--output", cmb.output, "phase-shift CSV ('-' for stdout)")->capture_default_str();
  combine->add_flag("--degrees", cmb.degrees, "input angles are in degrees");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << sub->help();
    }
    return kUsage;
  }

  try {
    if (invert->parsed()) return cmd_invert(inv, out, err);
    if (synth->parsed()) return cmd_synth(syn, out, err);
    if (check->parsed()) return cmd_check(chk, out, err);
    if (combine->parsed()) return cmd_combine(cmb, out, err);
  } catch (const ParityError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kUsage;
}

}  // namespace ctinv::cli
