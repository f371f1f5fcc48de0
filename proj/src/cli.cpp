#include "oscmono/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "oscmono/errors.hpp"
#include "oscmono/monodromy.hpp"
#include "oscmono/reduction.hpp"
#include "oscmono/semiclassics.hpp"
#include "oscmono/separation.hpp"
#include "oscmono/spectrum.hpp"

namespace oscmono::cli {

using nlohmann::json;

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string num(long x) { return std::to_string(x); }

json pair_list(const std::vector<std::pair<double, double>>& v) {
  json a = json::array();
  for (const auto& [x, y] : v) a.push_back({x, y});
  return a;
}

json matrix_json(const IntMatrix2& m) { return {{m[0][0], m[0][1]}, {m[1][0], m[1][1]}}; }

// every double that reaches the output must be finite
void require_finite(const json& j) {
  if (j.is_number_float() && !std::isfinite(j.get<double>()))
    throw NumericalError("non-finite value in output");
  if (j.is_structured())
    for (const auto& el : j) require_finite(el);
}

}  // namespace

std::string serialize(const Artifact& art, const OscillatorParams& prm, const std::string& format) {
  if (format == "json") {
    json doc;
    doc["schema"] = {{"name", "oscmono." + art.name}, {"version", kSchemaVersion}};
    doc["params"] = {{"a", prm.a}, {"omega", prm.omega}, {"hbar", prm.hbar}};
    doc["data"] = art.data;
    require_finite(doc);
    return doc.dump(2) + "\n";
  }
  if (format == "csv") {
    if (art.csv_header.empty()) throw InputError("subcommand " + art.name + " has no csv form");
    std::ostringstream os;
    for (std::size_t i = 0; i < art.csv_header.size(); ++i)
      os << (i ? "," : "") << art.csv_header[i];
    os << "\n";
    for (const auto& row : art.csv_rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << "\n";
    }
    return os.str();
  }
  throw InputError("format must be json or csv");
}

namespace {

struct Flags {
  double a = 1.0, omega = 1.0, hbar = 1.0;
  double energy = 1.0, lz = 0.0, g = 0.0;
  std::vector<double> g_list;
  int n = 20, m = 0, grid = 201, radius = 1;
  std::string format = "json", out, mode = "cartesian";
  bool langer = false;
  double tol = 1e-10;
  std::vector<double> start;
  double tmax = 0.0, dt = 1e-3;
};

OscillatorParams params_of(const Flags& f) {
  OscillatorParams p{f.a, f.omega, f.hbar};
  p.validate();
  return p;
}

Artifact do_bifurcation(const OscillatorParams& prm, const Flags& f, bool with_point) {
  if (f.grid < 2) throw InputError("--grid must be at least 2");
  const auto sl = energy_slice(prm, f.energy, f.grid);
  Artifact art;
  art.name = "bifurcation";
  auto& d = art.data;
  d["E"] = sl.E;
  d["E_c"] = sl.loci.E_c;
  d["loci"] = {{"L1", sl.loci.L1}, {"L2", sl.loci.L2}, {"L3", sl.loci.L3}};
  d["lower_branch"] = pair_list(sl.lower_branch);
  d["upper_branch"] = pair_list(sl.upper_branch);
  d["isolated_point"] = sl.isolated_point ? json{sl.isolated_point->first, sl.isolated_point->second}
                                          : json(nullptr);
  d["kink_present"] = sl.kink_present;
  art.csv_header = {"branch", "lz", "g"};
  for (const auto& [x, y] : sl.lower_branch) art.csv_rows.push_back({"lower", format_number(x), format_number(y)});
  for (const auto& [x, y] : sl.upper_branch) art.csv_rows.push_back({"upper", format_number(x), format_number(y)});
  if (sl.isolated_point)
    art.csv_rows.push_back({"isolated", format_number(sl.isolated_point->first),
                            format_number(sl.isolated_point->second)});
  if (with_point) {
    const MotionValues v{f.energy, f.lz, f.g};
    const auto c = classify(prm, v);
    json pt = {{"lz", f.lz}, {"g", f.g}, {"region", region_name(c.label)}, {"admissible", c.admissible},
               {"discriminant", discriminant(prm, v)}};
    if (c.admissible) {
      const auto cd = caustic(prm, v);
      pt["caustic"] = {{"xi_turning", cd.xi_turning}, {"eta_turning", cd.eta_turning}, {"kind", cd.kind}};
    } else {
      pt["caustic"] = nullptr;
    }
    d["point"] = pt;
  }
  return art;
}

Artifact do_reduced(const OscillatorParams& prm, const Flags& f) {
  if (f.grid < 2) throw InputError("--grid must be at least 2");
  const auto sl = reduced_slice(prm, f.energy, f.lz, f.grid, f.g_list);
  const auto gr = g_range(prm, f.energy, f.lz);
  const auto hv = hopf_and_singular_fiber(prm, f.energy);
  Artifact art;
  art.name = "reduced";
  auto& d = art.data;
  d["E"] = sl.E;
  d["lz"] = sl.lz;
  d["g_range"] = {{"g_min", gr.g_min}, {"g_max", gr.g_max}, {"R_at_max", gr.R_at_max}};
  d["hopf"] = {{"E_c", hv.E_c}, {"pinched", hv.pinched}};
  d["upper"] = pair_list(sl.upper);
  d["lower"] = pair_list(sl.lower);
  d["singular_R"] = sl.singular_R;
  json cs = json::array();
  for (const auto& c : sl.contours)
    cs.push_back({{"g", c.g}, {"points", pair_list(c.points)},
                  {"hits_origin_singularity", c.hits_origin_singularity},
                  {"hits_corner_singularity", c.hits_corner_singularity}});
  d["contours"] = cs;
  art.csv_header = {"curve", "g", "R", "X"};
  for (const auto& [R, X] : sl.upper) art.csv_rows.push_back({"upper", "", format_number(R), format_number(X)});
  for (const auto& [R, X] : sl.lower) art.csv_rows.push_back({"lower", "", format_number(R), format_number(X)});
  for (const auto& c : sl.contours)
    for (const auto& [R, X] : c.points)
      art.csv_rows.push_back({"contour", format_number(c.g), format_number(R), format_number(X)});
  return art;
}

Artifact do_volume(const OscillatorParams& prm, const Flags& f, bool quantized) {
  double E = f.energy, lz = f.lz;
  if (quantized) {
    if (f.n < 0) throw InputError("--n must be nonnegative");
    if (std::abs(f.m) > f.n) throw DomainError("|m| exceeds n");
    E = prm.hbar * prm.omega * (f.n + 1.5);
    lz = prm.hbar * f.m;
  }
  const auto v = symplectic_volume(prm, E, lz);
  Artifact art;
  art.name = "volume";
  auto& d = art.data;
  d["E"] = E;
  d["lz"] = lz;
  d["volume"] = v.volume;
  d["weyl_count"] = v.weyl_count;
  d["exact_count"] = v.exact_count ? json(*v.exact_count) : json(nullptr);
  if (quantized) {
    d["n"] = f.n;
    d["m"] = f.m;
    d["total_states"] = total_states(f.n);
  }
  art.csv_header = {"E", "lz", "volume", "weyl_count", "exact_count"};
  art.csv_rows.push_back({format_number(E), format_number(lz), format_number(v.volume),
                          format_number(v.weyl_count), v.exact_count ? num(*v.exact_count) : ""});
  return art;
}

Artifact do_actions(const OscillatorParams& prm, const Flags& f) {
  const MotionValues v{f.energy, f.lz, f.g};
  const auto t = action_integrals(prm, v, f.tol);
  const auto c = classify(prm, v);
  Artifact art;
  art.name = "actions";
  auto& d = art.data;
  d["E"] = v.E;
  d["lz"] = v.lz;
  d["g"] = v.g;
  d["region"] = region_name(c.label);
  d["I_eta"] = t.I_eta;
  d["I_xi"] = t.I_xi;
  d["I_phi"] = t.I_phi;
  d["eta_interval"] = {t.eta_interval.first, t.eta_interval.second};
  d["xi_interval"] = {t.xi_interval.first, t.xi_interval.second};
  d["error_estimate"] = t.error_estimate;
  d["E_over_omega"] = v.E / prm.omega;
  d["sum_eta_xi_phi"] = printed_action_sum(t);
  d["sum_eta_2xi_phi"] = energy_action_sum(t);
  d["lz_slopes"] = nullptr;
  if (v.lz == 0.0) {
    try {
      const auto sp = eta_slopes_at_zero(prm, v.E, v.g);
      d["lz_slopes"] = {{"plus", sp.plus}, {"minus", sp.minus}, {"error", sp.error}, {"mismatch", sp.mismatch}};
    } catch (const DomainError&) {
      // the one-sided stencil leaves the admissible band; no slope data
    }
  }
  art.csv_header = {"E", "lz", "g", "I_eta", "I_xi", "I_phi", "sum_eta_xi_phi", "sum_eta_2xi_phi"};
  art.csv_rows.push_back({format_number(v.E), format_number(v.lz), format_number(v.g), format_number(t.I_eta),
                          format_number(t.I_xi), format_number(t.I_phi), format_number(printed_action_sum(t)),
                          format_number(energy_action_sum(t))});
  return art;
}

Artifact do_ebk(const OscillatorParams& prm, const Flags& f) {
  EbkOptions opt;
  opt.langer = f.langer;
  opt.quad_tol = f.tol;
  const auto sc = ebk_spectrum(prm, f.n, opt);
  const auto ex = joint_spectrum(prm, f.n);
  const auto cmp = compare_ebk(sc, ex);
  Artifact art;
  art.name = "ebk";
  auto& d = art.data;
  d["n"] = f.n;
  d["langer"] = f.langer;
  d["exact_energy"] = ex.energy();
  d["energy_offset"] = sc.energy_offset;
  d["fraction_within_spacing"] = cmp.fraction_within;
  json pts = json::array();
  art.csv_header = {"m", "n_eta", "n_xi", "E", "lz", "g", "nearest_exact", "local_spacing", "within"};
  for (std::size_t i = 0; i < sc.points.size(); ++i) {
    const auto& p = sc.points[i];
    const auto& mt = cmp.matches[i];
    pts.push_back({{"m", p.m}, {"n_eta", p.n_eta}, {"n_xi", p.n_xi}, {"E", p.E}, {"lz", p.lz},
                   {"lz_eff", p.lz_eff}, {"g", p.g}, {"xi_residual", p.xi_residual},
                   {"nearest_exact", mt.nearest_exact}, {"local_spacing", mt.local_spacing},
                   {"within", mt.within}});
    art.csv_rows.push_back({num(p.m), num(p.n_eta), num(p.n_xi), format_number(p.E), format_number(p.lz),
                            format_number(p.g), format_number(mt.nearest_exact),
                            format_number(mt.local_spacing), mt.within ? "1" : "0"});
  }
  d["points"] = pts;
  return art;
}

Artifact do_spectrum(const OscillatorParams& prm, const Flags& f, bool one_column) {
  const auto js = joint_spectrum(prm, f.n);
  Artifact art;
  art.name = "spectrum";
  auto& d = art.data;
  d["n"] = js.n;
  d["E"] = js.energy();
  d["count"] = js.size();
  json cols = json::array();
  art.csv_header = {"m", "g"};
  for (const auto& [m, col] : js.columns) {
    if (one_column && m != f.m) continue;
    cols.push_back({{"m", m}, {"g", col}});
    for (double g : col) art.csv_rows.push_back({num(m), format_number(g)});
  }
  d["columns"] = cols;
  if (one_column) {
    const auto t = build_g_matrix(prm, f.n, f.m, Provenance::LadderOracle);
    d["matrix"] = {{"diag", t.diag}, {"offdiag", t.offdiag}, {"provenance", provenance_name(t.provenance)}};
  }
  return art;
}

Artifact do_heun(const OscillatorParams& prm, const Flags& f) {
  if (f.m < 0 || f.n < f.m) throw InputError("heun needs 0 <= m <= n");
  const int d = (f.n - f.m) / 2;
  const Parity par = (f.n - f.m) % 2 ? Parity::Odd : Parity::Even;
  const auto h = heun_spectrum(prm, f.m, d, par);
  const auto o = eigen_tridiagonal(build_g_matrix(prm, f.n, f.m));
  double worst = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i)
    worst = std::max(worst, std::abs(h[i] - o[i]) / std::max(1.0, std::abs(o[i])));
  Artifact art;
  art.name = "heun";
  auto& j = art.data;
  j["m"] = f.m;
  j["d"] = d;
  j["parity"] = par == Parity::Odd ? "odd" : "even";
  j["n"] = f.n;
  j["E"] = prm.hbar * prm.omega * (f.n + 1.5);
  j["g"] = h;
  j["g_oracle"] = o;
  j["max_rel_diff"] = worst;
  art.csv_header = {"index", "g_heun", "g_oracle"};
  for (std::size_t i = 0; i < h.size(); ++i)
    art.csv_rows.push_back({num(static_cast<long>(i)), format_number(h[i]), format_number(o[i])});
  return art;
}

Artifact do_limits(const OscillatorParams& prm, const Flags& f) {
  const auto ll = limit_joint_spectrum(prm, f.n, parse_limit_mode(f.mode));
  Artifact art;
  art.name = "limits";
  auto& d = art.data;
  d["mode"] = limit_mode_name(ll.mode);
  d["n"] = ll.n;
  d["points"] = pair_list(ll.points);
  d["vertices"] = pair_list(ll.vertices);
  d["layer_g"] = ll.layer_g;
  art.csv_header = {"x", "y"};
  for (const auto& [x, y] : ll.points) art.csv_rows.push_back({format_number(x), format_number(y)});
  return art;
}

Artifact do_monodromy(const OscillatorParams& prm, const Flags& f) {
  const auto js = joint_spectrum(prm, f.n);
  const auto rep = monodromy_report(js, f.radius);
  const auto& r = rep.result;
  Artifact art;
  art.name = "monodromy";
  auto& d = art.data;
  d["n"] = rep.n;
  d["E"] = rep.E;
  d["E_c"] = rep.E_c;
  d["pinched"] = rep.pinched;
  d["loop_kind"] = rep.loop_kind;
  json wp = json::array();
  for (const auto& w : rep.loop.waypoints) wp.push_back({w.m, w.rank});
  d["loop"] = {{"waypoints", wp}, {"winding", rep.loop.winding}, {"encloses_origin", rep.loop.encloses_origin}};
  d["matrix"] = matrix_json(r.matrix);
  d["trace"] = r.trace;
  d["det"] = r.det;
  d["defect_detected"] = r.defect_detected;
  d["consistent"] = rep.consistent;
  d["anomaly"] = r.anomaly;
  json path = json::array();
  art.csv_header = {"step", "m", "rank", "lz", "g", "v_dm", "v_drank"};
  for (std::size_t i = 0; i < r.path.size(); ++i) {
    const auto& c = r.path[i];
    const double g = js.columns.at(c.at.m).at(c.at.rank);
    path.push_back({{"m", c.at.m}, {"rank", c.at.rank}, {"u", c.u}, {"v", c.v}});
    art.csv_rows.push_back({num(static_cast<long>(i)), num(c.at.m), num(c.at.rank),
                            format_number(prm.hbar * c.at.m), format_number(g), num(c.v[0]), num(c.v[1])});
  }
  d["path"] = path;
  json lt = json::array();
  for (const auto& t : r.local_transitions) lt.push_back(matrix_json(t));
  d["local_transitions"] = lt;
  return art;
}

Artifact do_orbit(const OscillatorParams& prm, const Flags& f, bool have_start) {
  PhasePoint s;
  if (have_start) {
    if (f.start.size() != 6) throw InputError("--start takes x y z px py pz");
    s.r = {f.start[0], f.start[1], f.start[2]};
    s.p = {f.start[3], f.start[4], f.start[5]};
  } else {
    if (f.energy < 0.0) throw InputError("energy must be nonnegative");
    s.r = {0.0, 0.0, std::sqrt(2.0 * f.energy) / prm.omega};  // z-axis turning point
  }
  const double tmax = f.tmax > 0.0 ? f.tmax : 2.0 * M_PI / prm.omega;
  const auto tr = integrate_orbit(s, prm, tmax, f.dt);
  if (f.grid < 2) throw InputError("--grid must be at least 2");
  const std::size_t N = tr.samples.size();
  const std::size_t stride = std::max<std::size_t>(1, (N + f.grid - 2) / (f.grid - 1));
  Artifact art;
  art.name = "orbit";
  auto& d = art.data;
  d["t_max"] = tmax;
  d["dt"] = f.dt;
  d["steps"] = N - 1;
  d["drift"] = {{"H", tr.drift[0]}, {"Lz", tr.drift[1]}, {"G", tr.drift[2]}};
  json sm = json::array();
  art.csv_header = {"t", "x", "y", "z", "px", "py", "pz", "H", "Lz", "G"};
  for (std::size_t i = 0; i < N; ++i) {
    if (i % stride != 0 && i + 1 != N) continue;
    const auto& p = tr.samples[i];
    const auto iv = eval_integrals(p, prm);
    sm.push_back({tr.t[i], p.r[0], p.r[1], p.r[2], p.p[0], p.p[1], p.p[2]});
    art.csv_rows.push_back({format_number(tr.t[i]), format_number(p.r[0]), format_number(p.r[1]),
                            format_number(p.r[2]), format_number(p.p[0]), format_number(p.p[1]),
                            format_number(p.p[2]), format_number(iv.motion.E), format_number(iv.motion.lz),
                            format_number(iv.motion.g)});
  }
  d["samples"] = sm;
  return art;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Prolate spheroidal separation of the 3D isotropic oscillator and quantum monodromy",
               "oscmono"};
  app.require_subcommand(1, 1);
  app.add_option("--a", f.a, "focal half-distance (> 0)")->capture_default_str();
  app.add_option("--omega", f.omega, "angular frequency (> 0)")->capture_default_str();
  app.add_option("--hbar", f.hbar, "reduced Planck constant (> 0)")->capture_default_str();
  app.add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", f.out, "output file (default: standard output)");

  auto sub = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  auto* bif = sub("bifurcation", "constant-energy slice of the bifurcation diagram");
  bif->add_option("--energy", f.energy)->capture_default_str();
  bif->add_option("--grid", f.grid, "samples per branch")->capture_default_str();
  auto* bif_lz = bif->add_option("--lz", f.lz, "with --g: classify this point");
  auto* bif_g = bif->add_option("--g", f.g);

  auto* red = sub("reduced", "reduced phase space slice Y = 0 and G contours");
  red->add_option("--energy", f.energy)->capture_default_str();
  red->add_option("--lz", f.lz)->capture_default_str();
  red->add_option("--grid", f.grid)->capture_default_str();
  red->add_option("--g", f.g_list, "contour values (repeatable)");

  auto* vol = sub("volume", "symplectic volume, Weyl and exact state counts");
  vol->add_option("--energy", f.energy);
  vol->add_option("--lz", f.lz);
  auto* vol_n = vol->add_option("--n", f.n, "principal quantum number (sets E and lz = hbar m)");
  vol->add_option("--m", f.m);

  auto* act = sub("actions", "action integrals at (E, lz, g)");
  act->add_option("--energy", f.energy)->capture_default_str();
  act->add_option("--lz", f.lz)->capture_default_str();
  act->add_option("--g", f.g)->capture_default_str();
  act->add_option("--tol", f.tol, "relative quadrature tolerance")->capture_default_str();

  auto* ebk = sub("ebk", "semiclassical shell compared with the exact spectrum");
  ebk->add_option("--n", f.n)->capture_default_str();
  ebk->add_flag("--langer", f.langer, "use |m| + 1/2 in the lz term");
  ebk->add_option("--tol", f.tol)->capture_default_str();

  auto* spec = sub("spectrum", "exact joint spectrum of (H, Lz, G) in shell n");
  spec->add_option("--n", f.n)->capture_default_str();
  auto* spec_m = spec->add_option("--m", f.m, "only this column, with its matrix");

  auto* heun = sub("heun", "three-term recursion spectrum for one (n, m)");
  heun->add_option("--n", f.n)->capture_default_str();
  heun->add_option("--m", f.m)->capture_default_str();

  auto* lim = sub("limits", "toric limit lattices and their polygons");
  lim->add_option("--n", f.n)->capture_default_str();
  lim->add_option("--mode", f.mode)
      ->check(CLI::IsMember({"cartesian", "prolate_infinity", "spherical"}))
      ->capture_default_str();

  auto* mono = sub("monodromy", "lattice cell transport around (0, 0)");
  mono->add_option("--n", f.n)->capture_default_str();
  mono->add_option("--radius", f.radius, "rank half-height of the loop window")->capture_default_str();

  auto* orb = sub("orbit", "integrate one orbit and report drift of H, Lz, G");
  orb->add_option("--energy", f.energy, "z-axis start at this energy when --start is absent")->capture_default_str();
  auto* orb_start = orb->add_option("--start", f.start, "x y z px py pz")->expected(6);
  orb->add_option("--tmax", f.tmax, "default one period 2 pi/omega");
  orb->add_option("--dt", f.dt)->capture_default_str();
  orb->add_option("--grid", f.grid, "maximum emitted samples")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    const OscillatorParams prm = params_of(f);
    Artifact art;
    if (bif->parsed()) {
      if ((bif_lz->count() > 0) != (bif_g->count() > 0)) throw InputError("--lz and --g go together");
      art = do_bifurcation(prm, f, bif_g->count() > 0);
    } else if (red->parsed()) {
      art = do_reduced(prm, f);
    } else if (vol->parsed()) {
      art = do_volume(prm, f, vol_n->count() > 0);
    } else if (act->parsed()) {
      art = do_actions(prm, f);
    } else if (ebk->parsed()) {
      art = do_ebk(prm, f);
    } else if (spec->parsed()) {
      art = do_spectrum(prm, f, spec_m->count() > 0);
    } else if (heun->parsed()) {
      art = do_heun(prm, f);
    } else if (lim->parsed()) {
      art = do_limits(prm, f);
    } else if (mono->parsed()) {
      art = do_monodromy(prm, f);
    } else {
      art = do_orbit(prm, f, orb_start->count() > 0);
    }
    const std::string text = serialize(art, prm, f.format);
    if (f.out.empty()) {
      out << text;
    } else {
      std::ofstream os(f.out, std::ios::binary);
      if (!os) throw InputError("cannot open " + f.out);
      os << text;
      if (!os) throw NumericalError("write to " + f.out + " failed");
    }
    return 0;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace oscmono::cli
