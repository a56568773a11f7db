// ribaucour: scene-file driver for validation, construction, envelopes,
// analysis and export.
//
// exit codes: 0 ok, 2 validation failure, 3 construction failure, 4 I/O failure

#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <ribaucour/obj_export.hpp>
#include <ribaucour/report.hpp>
#include <ribaucour/scene.hpp>

using namespace ribaucour;

namespace {

enum Exit { ok = 0, invalid = 2, construction = 3, io = 4 };

struct Global {
  std::string scene, out;
  std::optional<double> tol_proj, tol_light, tol_rank;
  std::uint64_t seed = 1;
};

// thrown for input problems the library does not know about
struct Invalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Tolerances tolerances(const Global& g, const Scene& s) {
  Tolerances t = s.tolerances.apply({});
  if (g.tol_proj) t.proj = *g.tol_proj;
  if (g.tol_light) t.light = *g.tol_light;
  if (g.tol_rank) t.rank = *g.tol_rank;
  return t;
}

Scene load(const Global& g) {
  if (g.scene.empty()) throw Invalid("--scene is required");
  return load_scene(g.scene);
}

// structural invariants must hold before any command touches the objects
void require_sane(const Scene& s, const Tolerances& tol) {
  auto issues = check_scene(s, tol);
  if (issues.empty()) return;
  std::string msg = "scene fails its invariants:";
  for (const auto& i : issues) msg += "\n  " + i.where + ": " + i.what;
  throw Invalid(msg);
}

void emit(const Global& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    return;
  }
  save_text(g.out, text);
}

void emit_scene(const Global& g, const Scene& s) { emit(g, format_scene(s)); }

std::string dump(const Report& r) { return r.dump(2) + "\n"; }

// ---------------------------------------------------------------- validate

int cmd_validate(const Global& g) {
  Scene s = load(g);
  Tolerances tol = tolerances(g, s);
  Report out;
  out["format"] = "ribaucour-report";
  out["command"] = "validate";
  auto issues = check_scene(s, tol);
  Report iss = Report::array();
  for (const auto& i : issues) iss.push_back(Report{{"where", i.where}, {"what", i.what}});
  out["scene_issues"] = iss;
  bool pass = issues.empty();
  if (pass) {
    Report cs = Report::object();
    std::vector<std::pair<std::string, RCongruence>> congs;
    for (const auto& c : s.congruences) {
      RCongruence r = s.congruence(c.name);
      Report x = congruence_report(r, tol);
      pass = pass && x["valid"].get<bool>();
      if (x["valid"].get<bool>()) congs.emplace_back(c.name, r);
      cs[c.name] = x;
    }
    out["congruences"] = cs;
    Report es = Report::object();
    for (const auto& e : s.envelopes) {
      LegendreMap f = s.envelope(e.name, tol);
      Report x = envelope_report(f, s.frame, tol);
      pass = pass && x["valid"].get<bool>();
      Report env = Report::array();
      for (const auto& [name, r] : congs) {
        if (verify_envelope(f, r, tol).ok(tol)) env.push_back(name);
      }
      x["envelopes_congruences"] = env;
      es[e.name] = x;
    }
    out["envelopes"] = es;
  }
  out["pass"] = pass;
  emit(g, dump(out));
  return pass ? ok : invalid;
}

// ---------------------------------------------------------------- construct

struct ConstructArgs {
  std::string name, curves, legendre, line1, line2;
  std::optional<double> cross_ratio, lambda;
};

int cmd_construct(const Global& g, const ConstructArgs& a) {
  Scene s = load(g);
  Tolerances tol = tolerances(g, s);
  require_sane(s, tol);
  if (a.name.empty()) throw Invalid("--name is required");
  RCongruence r;
  if (!a.curves.empty()) {
    auto comma = a.curves.find(',');
    if (comma == std::string::npos) throw Invalid("--from-curves takes two curve names separated by a comma");
    std::vector<Sphere> c1 = s.curve(a.curves.substr(0, comma)), c2 = s.curve(a.curves.substr(comma + 1));
    if (a.cross_ratio.has_value() == a.lambda.has_value()) throw Invalid("give exactly one of --cross-ratio, --lambda");
    bool fresh = s.congruences.empty() && s.envelopes.empty();
    if (!fresh && (c1.size() != s.m + 1 || c2.size() != s.n + 1))
      throw Invalid("curve lengths do not match the scene grid");
    FaceChoices ch{a.lambda ? ChoiceMode::lambda : ChoiceMode::cross_ratio, {a.lambda ? *a.lambda : *a.cross_ratio}};
    r = construct_from_curves(c1, c2, ch, tol);
    s.m = r.grid.m();
    s.n = r.grid.n();
  } else if (!a.legendre.empty()) {
    if (a.line1.empty() || a.line2.empty()) throw Invalid("--legendre needs --line1 and --line2");
    r = congruence_from_legendre(s.envelope(a.legendre, tol), s.curve(a.line1), s.curve(a.line2), tol);
  } else {
    throw Invalid("choose --from-curves or --legendre");
  }
  CongruenceReport rep = validate(r, tol);
  if (!rep.ok()) throw Error(Errc::DegenerateConfiguration, "constructed congruence fails validation");
  s.put_congruence(a.name, r);
  emit_scene(g, s);
  return ok;
}

// ---------------------------------------------------------------- envelope

struct EnvelopeArgs {
  std::string congruence, name, element;
  std::size_t vertex = 0;
  std::vector<double> angles;
  bool random = false;
  std::optional<std::size_t> channel_line;
  std::size_t count = 1;
  double theta = 0.0;
};

int cmd_envelope(const Global& g, const EnvelopeArgs& a) {
  Scene s = load(g);
  Tolerances tol = tolerances(g, s);
  require_sane(s, tol);
  if (a.name.empty() || a.congruence.empty()) throw Invalid("--congruence and --name are required");
  RCongruence r = s.congruence(a.congruence);
  if (!validate(r, tol).ok()) throw Invalid("congruence '" + a.congruence + "' fails validation");
  if (a.vertex >= r.grid.vertex_count()) throw Invalid("--vertex out of range");
  std::vector<std::pair<std::string, LegendreMap>> made;
  if (a.channel_line) {
    auto envs = construct_channel_envelopes(r, *a.channel_line, a.count, a.theta, tol);
    for (std::size_t k = 0; k < envs.size(); ++k)
      made.emplace_back(a.count == 1 ? a.name : a.name + "_" + std::to_string(k), envs[k]);
  } else {
    ContactElement f0;
    if (!a.element.empty()) {
      f0 = s.element(a.element, tol);
    } else if (a.angles.size() == 2) {
      f0 = element_at_angles(r.at(a.vertex), a.angles[0], a.angles[1], tol);
    } else if (a.random) {
      std::mt19937_64 gen(g.seed);
      std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
      double th = u(gen), ph = u(gen);
      f0 = element_at_angles(r.at(a.vertex), th, ph, tol);
    } else {
      throw Invalid("choose --element, --angles, --random or --channel");
    }
    made.emplace_back(a.name, propagate(r, a.vertex, f0, tol));
  }
  for (const auto& [name, f] : made) {
    EnvelopeReport e = verify_envelope(f, r, tol);
    if (!e.ok(tol)) throw Error(Errc::ClosureFailure, "envelope '" + name + "' does not close");
    s.put_envelope(name, f);
  }
  emit_scene(g, s);
  return ok;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string congruence, envelope, partner, third;
  std::size_t face = 0;
  double t = 0.0;
};

int cmd_analyze(const Global& g, const AnalyzeArgs& a) {
  Scene s = load(g);
  Tolerances tol = tolerances(g, s);
  require_sane(s, tol);
  if (a.congruence.empty() || a.envelope.empty()) throw Invalid("--congruence and --envelope are required");
  RCongruence r = s.congruence(a.congruence);
  if (!validate(r, tol).ok()) throw Invalid("congruence '" + a.congruence + "' fails validation");
  LegendreMap f = s.envelope(a.envelope, tol);
  Report out;
  out["format"] = "ribaucour-report";
  out["command"] = "analyze";
  EnvelopeReport er = verify_envelope(f, r, tol);
  out["envelope"] = envelope_check_report(er, tol);
  if (!er.ok(tol)) {
    emit(g, dump(out));
    return invalid;
  }
  out["envelope_geometry"] = envelope_report(f, s.frame, tol);
  Report um = Report::array();
  for (const auto& u : umbilic_faces(f, r, tol)) um.push_back(Report{{"face", u.face}, {"spread", u.spread}});
  out["umbilic_faces"] = um;
  if (a.face >= r.grid.face_count()) throw Invalid("--face out of range");
  try {
    CyclidicNet d = propagate_cyclidic(f, a.face, face_cyclide_family(f, a.face, a.t, tol), r, tol);
    CyclidicReport cr = check_cyclidic(f, d, tol);
    out["cyclidic_net"] = Report{{"ok", cr.ok(tol)}, {"membership", cr.membership}, {"sharing", cr.sharing}};
  } catch (const Error& e) {
    out["cyclidic_net"] = Report{{"ok", false}, {"error", e.what()}};
  }
  if (!a.partner.empty()) {
    LegendreMap fh = s.envelope(a.partner, tol);
    PairReport pr;
    RibaucourPair pair = sigma3_field(f, fh, r, tol, &pr);
    PartnerResult back = pair_partner(pair, fh, tol);
    double inv = 0.0;
    for (VertexId v = 0; v < f.elements.size(); ++v) inv = std::max(inv, distance(back.ghat.at(v), f.at(v)));
    Report p{{"swap", pr.swap}, {"fixes", pr.fixes}, {"elements", pr.elements}, {"orthogonal", pr.orthogonal},
             {"partner_involution", inv}};
    if (!a.third.empty()) {
      PartnerResult third = pair_partner(pair, s.envelope(a.third, tol), tol);
      p["third_spread"] = third.spread;
    }
    out["pair"] = p;
  }
  emit(g, dump(out));
  return ok;
}

// ---------------------------------------------------------------- export

struct ExportArgs {
  std::string what = "net", object;
  std::size_t resolution = 16;
  std::size_t face = 0;
  double t = 0.0;
};

int cmd_export(const Global& g, const ExportArgs& a) {
  Scene s = load(g);
  Tolerances tol = tolerances(g, s);
  require_sane(s, tol);
  if (a.what == "scene") {
    // every sphere as a raw 6-vector
    Scene raw = s;
    for (auto* list : {&raw.curves, &raw.congruences})
      for (auto& c : *list)
        for (auto& e : c.spheres) e.euclid.reset();
    for (auto& e : raw.elements) e.a.euclid.reset(), e.b.euclid.reset();
    for (auto& e : raw.envelopes)
      for (auto& [x, y] : e.elements) x.euclid.reset(), y.euclid.reset();
    emit_scene(g, raw);
    return ok;
  }
  if (a.object.empty()) throw Invalid("--object is required");
  ObjMesh mesh;
  if (a.what == "net") {
    if (s.find_envelope(a.object)) mesh = envelope_mesh(s.envelope(a.object, tol), s.frame, tol);
    else mesh = congruence_mesh(s.congruence(a.object), s.frame, tol);
  } else if (a.what == "spheres") {
    if (s.find_curve(a.object)) mesh = spheres_mesh(s.curve(a.object), a.resolution, s.frame, tol);
    else mesh = spheres_mesh(s.congruence(a.object).spheres, a.resolution, s.frame, tol);
  } else if (a.what == "cyclide") {
    LegendreMap f = s.envelope(a.object, tol);
    if (a.face >= f.grid.face_count()) throw Invalid("--face out of range");
    mesh = cyclide_mesh(face_cyclide_family(f, a.face, a.t, tol), a.resolution, s.frame, tol);
  } else {
    throw Invalid("--what must be net, spheres, cyclide or scene");
  }
  emit(g, mesh.str(a.what + " " + a.object));
  return ok;
}

int exit_for(Errc c) {
  switch (c) {
    case Errc::Io:
      return io;
    case Errc::Parse:
    case Errc::BadId:
    case Errc::UnsupportedFrame:
      return invalid;
    default:
      return construction;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete R-congruences, their envelopes and cyclidic nets"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--scene", g.scene, "scene file");
  app.add_option("--out", g.out, "output file (stdout when omitted)");
  app.add_option("--tol-proj", g.tol_proj, "projective equality gate");
  app.add_option("--tol-light", g.tol_light, "lightlike gate");
  app.add_option("--tol-rank", g.tol_rank, "relative rank cut-off");
  app.add_option("--seed", g.seed, "seed for randomized choices");

  auto* validate_cmd = app.add_subcommand("validate", "check every object of a scene");

  ConstructArgs ca;
  auto* construct_cmd = app.add_subcommand("construct", "add an R-congruence to a scene");
  construct_cmd->add_option("--name", ca.name, "name of the new congruence");
  construct_cmd->add_option("--from-curves", ca.curves, "two curve names: c1,c2");
  construct_cmd->add_option("--cross-ratio", ca.cross_ratio, "constant face cross-ratio");
  construct_cmd->add_option("--lambda", ca.lambda, "constant face lambda");
  construct_cmd->add_option("--legendre", ca.legendre, "envelope to build the congruence on");
  construct_cmd->add_option("--line1", ca.line1, "curve along the first family-1 line");
  construct_cmd->add_option("--line2", ca.line2, "curve along the first family-2 line");

  EnvelopeArgs ea;
  auto* envelope_cmd = app.add_subcommand("envelope", "add an enveloping Legendre map to a scene");
  envelope_cmd->add_option("--congruence", ea.congruence, "congruence to envelope");
  envelope_cmd->add_option("--name", ea.name, "name of the new envelope");
  envelope_cmd->add_option("--element", ea.element, "initial contact element");
  envelope_cmd->add_option("--vertex", ea.vertex, "vertex of the initial element");
  envelope_cmd->add_option("--angles", ea.angles, "initial element by two angles")->expected(2);
  envelope_cmd->add_flag("--random", ea.random, "initial element from --seed");
  envelope_cmd->add_option("--channel", ea.channel_line, "channel envelopes through this family-1 line");
  envelope_cmd->add_option("--count", ea.count, "number of channel envelopes");
  envelope_cmd->add_option("--theta", ea.theta, "first conic angle for channel envelopes");

  AnalyzeArgs aa;
  auto* analyze_cmd = app.add_subcommand("analyze", "report on an envelope and an optional partner");
  analyze_cmd->add_option("--congruence", aa.congruence, "the R-congruence");
  analyze_cmd->add_option("--envelope", aa.envelope, "the envelope");
  analyze_cmd->add_option("--partner", aa.partner, "second envelope of the same congruence");
  analyze_cmd->add_option("--third", aa.third, "third envelope, mapped by the pair's inversions");
  analyze_cmd->add_option("--face", aa.face, "start face of the cyclidic net");
  analyze_cmd->add_option("--t", aa.t, "face-cyclide parameter");

  ExportArgs xa;
  auto* export_cmd = app.add_subcommand("export", "write OBJ meshes or a raw scene");
  export_cmd->add_option("--what", xa.what, "net | spheres | cyclide | scene");
  export_cmd->add_option("--object", xa.object, "object to export");
  export_cmd->add_option("--resolution", xa.resolution, "samples per direction");
  export_cmd->add_option("--face", xa.face, "face of the cyclide");
  export_cmd->add_option("--t", xa.t, "face-cyclide parameter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : invalid;
  }

  try {
    if (*validate_cmd) return cmd_validate(g);
    if (*construct_cmd) return cmd_construct(g, ca);
    if (*envelope_cmd) return cmd_envelope(g, ea);
    if (*analyze_cmd) return cmd_analyze(g, aa);
    if (*export_cmd) return cmd_export(g, xa);
  } catch (const Invalid& e) {
    std::cerr << "error: " << e.what() << "\n";
    return invalid;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e.code());
  }
  return invalid;
}
