#pragma once

// Scene documents: a JSON key tree with a format tag and a version. Spheres
// are either raw 6-vectors or {center, radius} records; whichever form was
// read is written back, so load/save round-trips bit for bit.

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "envelope.hpp"

namespace ribaucour {

inline constexpr const char* scene_format = "ribaucour-scene";
inline constexpr int scene_version = 1;

struct SphereEntry {
  Vec6 raw = Vec6::Zero();
  std::optional<EuclideanSphere> euclid;  // set when read as center/radius

  static SphereEntry from_raw(const Vec6& v) { return {v, std::nullopt}; }
  static SphereEntry from_euclid(const Eigen::Vector3d& c, double radius) {
    return {sphere_encode(c, radius), EuclideanSphere{c, radius}};
  }
};

struct NamedSpheres {
  std::string name;
  std::vector<SphereEntry> spheres;
};

struct NamedElement {
  std::string name;
  SphereEntry a, b;
};

struct NamedEnvelope {
  std::string name;
  std::vector<std::pair<SphereEntry, SphereEntry>> elements;
};

struct ToleranceOverrides {
  std::optional<double> light, proj, rank, contact, closure;

  Tolerances apply(Tolerances t) const {
    if (light) t.light = *light;
    if (proj) t.proj = *proj;
    if (rank) t.rank = *rank;
    if (contact) t.contact = *contact;
    if (closure) t.closure = *closure;
    return t;
  }
  bool empty() const { return !light && !proj && !rank && !contact && !closure; }
};

struct Scene {
  int version = scene_version;
  std::size_t m = 0, n = 0;
  MoebiusFrame frame = MoebiusFrame::standard();
  bool frame_given = false;
  ToleranceOverrides tolerances;
  std::vector<NamedSpheres> curves;
  std::vector<NamedSpheres> congruences;
  std::vector<NamedElement> elements;
  std::vector<NamedEnvelope> envelopes;

  QuadComplex grid() const { return QuadComplex(m, n); }

  const NamedSpheres* find_curve(const std::string& k) const { return find(curves, k); }
  const NamedSpheres* find_congruence(const std::string& k) const { return find(congruences, k); }
  const NamedElement* find_element(const std::string& k) const { return find(elements, k); }
  const NamedEnvelope* find_envelope(const std::string& k) const { return find(envelopes, k); }

  RCongruence congruence(const std::string& k) const {
    const NamedSpheres* c = find_congruence(k);
    if (!c) throw Error(Errc::BadId, "no congruence named '" + k + "'");
    RCongruence r{grid(), {}};
    for (const SphereEntry& s : c->spheres) r.spheres.push_back(s.raw);
    return r;
  }
  std::vector<Sphere> curve(const std::string& k) const {
    const NamedSpheres* c = find_curve(k);
    if (!c) throw Error(Errc::BadId, "no curve named '" + k + "'");
    std::vector<Sphere> out;
    for (const SphereEntry& s : c->spheres) out.push_back(s.raw);
    return out;
  }
  ContactElement element(const std::string& k, const Tolerances& tol = {}) const {
    const NamedElement* e = find_element(k);
    if (!e) throw Error(Errc::BadId, "no contact element named '" + k + "'");
    return ContactElement(e->a.raw, e->b.raw, tol);
  }
  LegendreMap envelope(const std::string& k, const Tolerances& tol = {}) const {
    const NamedEnvelope* e = find_envelope(k);
    if (!e) throw Error(Errc::BadId, "no envelope named '" + k + "'");
    LegendreMap f{grid(), {}};
    for (const auto& [a, b] : e->elements) f.elements.emplace_back(a.raw, b.raw, tol);
    return f;
  }

  bool name_taken(const std::string& k) const {
    return find_curve(k) || find_congruence(k) || find_element(k) || find_envelope(k);
  }
  void put_congruence(const std::string& k, const RCongruence& r) {
    NamedSpheres c{k, {}};
    for (const Sphere& s : r.spheres) c.spheres.push_back(SphereEntry::from_raw(s));
    replace(congruences, std::move(c));
  }
  void put_envelope(const std::string& k, const LegendreMap& f) {
    NamedEnvelope e{k, {}};
    for (const ContactElement& el : f.elements) e.elements.emplace_back(SphereEntry::from_raw(el.b1()), SphereEntry::from_raw(el.b2()));
    replace(envelopes, std::move(e));
  }

 private:
  template <class T>
  static const T* find(const std::vector<T>& v, const std::string& k) {
    for (const T& x : v)
      if (x.name == k) return &x;
    return nullptr;
  }
  template <class T>
  static void replace(std::vector<T>& v, T x) {
    for (T& y : v)
      if (y.name == x.name) {
        y = std::move(x);
        return;
      }
    v.push_back(std::move(x));
  }
};

namespace scene_detail {
using nlohmann::ordered_json;

[[noreturn]] inline void syntax(const std::string& where, const std::string& what) {
  throw Error(Errc::Parse, where + ": " + what);
}

inline void only_keys(const ordered_json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) syntax(where, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) syntax(where, "unknown key '" + it.key() + "'");
}

inline double number(const ordered_json& j, const std::string& where) {
  if (!j.is_number()) syntax(where, "expected a number");
  return j.get<double>();
}

template <int N>
Eigen::Matrix<double, N, 1> vec(const ordered_json& j, const std::string& where) {
  if (!j.is_array() || j.size() != N) syntax(where, "expected " + std::to_string(N) + " numbers");
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v[i] = number(j[static_cast<std::size_t>(i)], where);
  return v;
}

inline SphereEntry sphere(const ordered_json& j, const std::string& where) {
  if (j.is_array()) return SphereEntry::from_raw(vec<6>(j, where));
  only_keys(j, {"center", "radius"}, where);
  if (!j.contains("center") || !j.contains("radius")) syntax(where, "sphere record needs center and radius");
  Eigen::Vector3d c = vec<3>(j["center"], where + ".center");
  double r = number(j["radius"], where + ".radius");
  try {
    return SphereEntry::from_euclid(c, r);
  } catch (const Error& e) {
    syntax(where, e.what());  // overflow in the encoding
  }
}

inline std::string name(const ordered_json& j, const std::string& where) {
  if (!j.contains("name") || !j["name"].is_string()) syntax(where, "missing name");
  std::string s = j["name"].get<std::string>();
  if (s.empty()) syntax(where, "empty name");
  return s;
}

inline std::vector<SphereEntry> sphere_list(const ordered_json& j, const std::string& where) {
  if (!j.is_array()) syntax(where, "expected an array of spheres");
  std::vector<SphereEntry> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(sphere(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline ordered_json vec_json(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline ordered_json sphere_json(const SphereEntry& s) {
  if (s.euclid) return ordered_json{{"center", vec_json(s.euclid->center)}, {"radius", s.euclid->radius}};
  return vec_json(s.raw);
}

inline ordered_json list_json(const std::vector<SphereEntry>& v) {
  ordered_json a = ordered_json::array();
  for (const SphereEntry& s : v) a.push_back(sphere_json(s));
  return a;
}
}  // namespace scene_detail

// Structural parse only; check_scene enforces the geometric invariants.
inline Scene parse_scene(const std::string& text) {
  using namespace scene_detail;
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    syntax("scene", e.what());
  }
  only_keys(j, {"format", "version", "grid", "frame", "tolerances", "curves", "congruences", "elements", "envelopes"}, "scene");
  if (!j.contains("format") || j["format"] != scene_format) syntax("scene", "not a ribaucour scene");
  if (!j.contains("version") || !j["version"].is_number_integer()) syntax("scene", "missing version");
  Scene s;
  s.version = j["version"].get<int>();
  if (s.version != scene_version) syntax("scene", "unsupported version " + std::to_string(s.version));
  if (j.contains("grid")) {
    only_keys(j["grid"], {"m", "n"}, "grid");
    if (!j["grid"].contains("m") || !j["grid"].contains("n") || !j["grid"]["m"].is_number_unsigned() ||
        !j["grid"]["n"].is_number_unsigned())
      syntax("grid", "needs non-negative integers m and n");
    s.m = j["grid"]["m"].get<std::size_t>();
    s.n = j["grid"]["n"].get<std::size_t>();
  }
  if (j.contains("frame")) {
    only_keys(j["frame"], {"p", "q"}, "frame");
    if (!j["frame"].contains("p") || !j["frame"].contains("q")) syntax("frame", "needs p and q");
    s.frame.p = vec<6>(j["frame"]["p"], "frame.p");
    s.frame.q = vec<6>(j["frame"]["q"], "frame.q");
    s.frame_given = true;
  }
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    only_keys(t, {"light", "proj", "rank", "contact", "closure"}, "tolerances");
    auto get = [&](const char* k, std::optional<double>& out) {
      if (t.contains(k)) out = number(t[k], std::string("tolerances.") + k);
    };
    get("light", s.tolerances.light);
    get("proj", s.tolerances.proj);
    get("rank", s.tolerances.rank);
    get("contact", s.tolerances.contact);
    get("closure", s.tolerances.closure);
  }
  auto arr = [&](const char* k) -> const ordered_json& {
    static const ordered_json empty = ordered_json::array();
    if (!j.contains(k)) return empty;
    if (!j[k].is_array()) syntax(k, "expected an array");
    return j[k];
  };
  for (std::size_t i = 0; i < arr("curves").size(); ++i) {
    const auto& c = arr("curves")[i];
    std::string w = "curves[" + std::to_string(i) + "]";
    only_keys(c, {"name", "spheres"}, w);
    s.curves.push_back({name(c, w), sphere_list(c.value("spheres", ordered_json::array()), w + ".spheres")});
  }
  for (std::size_t i = 0; i < arr("congruences").size(); ++i) {
    const auto& c = arr("congruences")[i];
    std::string w = "congruences[" + std::to_string(i) + "]";
    only_keys(c, {"name", "spheres"}, w);
    s.congruences.push_back({name(c, w), sphere_list(c.value("spheres", ordered_json::array()), w + ".spheres")});
  }
  for (std::size_t i = 0; i < arr("elements").size(); ++i) {
    const auto& c = arr("elements")[i];
    std::string w = "elements[" + std::to_string(i) + "]";
    only_keys(c, {"name", "spheres"}, w);
    auto l = sphere_list(c.value("spheres", ordered_json::array()), w + ".spheres");
    if (l.size() != 2) syntax(w, "a contact element needs two spheres");
    s.elements.push_back({name(c, w), l[0], l[1]});
  }
  for (std::size_t i = 0; i < arr("envelopes").size(); ++i) {
    const auto& c = arr("envelopes")[i];
    std::string w = "envelopes[" + std::to_string(i) + "]";
    only_keys(c, {"name", "elements"}, w);
    NamedEnvelope e{name(c, w), {}};
    const auto& els = c.value("elements", ordered_json::array());
    if (!els.is_array()) syntax(w, "elements must be an array");
    for (std::size_t k = 0; k < els.size(); ++k) {
      auto l = sphere_list(els[k], w + ".elements[" + std::to_string(k) + "]");
      if (l.size() != 2) syntax(w, "a contact element needs two spheres");
      e.elements.emplace_back(l[0], l[1]);
    }
    s.envelopes.push_back(std::move(e));
  }
  return s;
}

inline std::string format_scene(const Scene& s) {
  using namespace scene_detail;
  ordered_json j;
  j["format"] = scene_format;
  j["version"] = s.version;
  j["grid"] = ordered_json{{"m", s.m}, {"n", s.n}};
  if (s.frame_given) j["frame"] = ordered_json{{"p", vec_json(s.frame.p)}, {"q", vec_json(s.frame.q)}};
  if (!s.tolerances.empty()) {
    ordered_json t = ordered_json::object();
    if (s.tolerances.light) t["light"] = *s.tolerances.light;
    if (s.tolerances.proj) t["proj"] = *s.tolerances.proj;
    if (s.tolerances.rank) t["rank"] = *s.tolerances.rank;
    if (s.tolerances.contact) t["contact"] = *s.tolerances.contact;
    if (s.tolerances.closure) t["closure"] = *s.tolerances.closure;
    j["tolerances"] = t;
  }
  auto named = [](const std::vector<NamedSpheres>& v) {
    ordered_json a = ordered_json::array();
    for (const auto& c : v) a.push_back(ordered_json{{"name", c.name}, {"spheres", list_json(c.spheres)}});
    return a;
  };
  if (!s.curves.empty()) j["curves"] = named(s.curves);
  if (!s.congruences.empty()) j["congruences"] = named(s.congruences);
  if (!s.elements.empty()) {
    ordered_json a = ordered_json::array();
    for (const auto& e : s.elements) a.push_back(ordered_json{{"name", e.name}, {"spheres", list_json({e.a, e.b})}});
    j["elements"] = a;
  }
  if (!s.envelopes.empty()) {
    ordered_json a = ordered_json::array();
    for (const auto& e : s.envelopes) {
      ordered_json els = ordered_json::array();
      for (const auto& [x, y] : e.elements) els.push_back(list_json({x, y}));
      a.push_back(ordered_json{{"name", e.name}, {"elements", els}});
    }
    j["envelopes"] = a;
  }
  return j.dump(1) + "\n";
}

struct SceneIssue {
  std::string where;
  std::string what;
};

// Geometric invariants of a parsed scene: names unique, sizes match the grid,
// spheres lightlike, element spheres in contact, frame sane.
inline std::vector<SceneIssue> check_scene(const Scene& s, const Tolerances& tol = {}) {
  std::vector<SceneIssue> out;
  std::set<std::string> names;
  auto claim = [&](const std::string& k, const std::string& where) {
    if (!names.insert(k).second) out.push_back({where, "duplicate name '" + k + "'"});
  };
  auto light = [&](const SphereEntry& e, const std::string& where) {
    if (!(e.raw.norm() > tol.zero)) out.push_back({where, "zero vector"});
    else if (!is_lightlike(e.raw, tol)) out.push_back({where, "not lightlike"});
  };
  if (s.frame_given) {
    double pp = inner(s.frame.p, s.frame.p) / s.frame.p.squaredNorm();
    if (!(pp < -0.5)) out.push_back({"frame.p", "point sphere complex must be timelike"});
    if (!is_lightlike(s.frame.q, tol)) out.push_back({"frame.q", "not lightlike"});
    if (std::abs(rel_inner(s.frame.p, s.frame.q)) > tol.light) out.push_back({"frame.q", "not orthogonal to p"});
  }
  bool euclid = false;
  for (const auto& c : s.curves) {
    claim(c.name, "curve " + c.name);
    for (std::size_t i = 0; i < c.spheres.size(); ++i) {
      light(c.spheres[i], "curve " + c.name + "[" + std::to_string(i) + "]");
      euclid |= c.spheres[i].euclid.has_value();
    }
  }
  for (const auto& c : s.congruences) {
    claim(c.name, "congruence " + c.name);
    if (c.spheres.size() != (s.m + 1) * (s.n + 1))
      out.push_back({"congruence " + c.name, "expected " + std::to_string((s.m + 1) * (s.n + 1)) + " spheres"});
    for (std::size_t i = 0; i < c.spheres.size(); ++i) {
      light(c.spheres[i], "congruence " + c.name + "[" + std::to_string(i) + "]");
      euclid |= c.spheres[i].euclid.has_value();
    }
  }
  auto element_ok = [&](const SphereEntry& a, const SphereEntry& b, const std::string& where) {
    light(a, where + ".0");
    light(b, where + ".1");
    euclid |= a.euclid.has_value() || b.euclid.has_value();
    try {
      ContactElement(a.raw, b.raw, tol);
    } catch (const Error& e) {
      out.push_back({where, e.what()});
    }
  };
  for (const auto& e : s.elements) {
    claim(e.name, "element " + e.name);
    element_ok(e.a, e.b, "element " + e.name);
  }
  for (const auto& e : s.envelopes) {
    claim(e.name, "envelope " + e.name);
    if (e.elements.size() != (s.m + 1) * (s.n + 1))
      out.push_back({"envelope " + e.name, "expected " + std::to_string((s.m + 1) * (s.n + 1)) + " elements"});
    for (std::size_t i = 0; i < e.elements.size(); ++i)
      element_ok(e.elements[i].first, e.elements[i].second, "envelope " + e.name + "[" + std::to_string(i) + "]");
  }
  if (euclid && !s.frame.is_standard()) out.push_back({"frame", "center/radius records need the standard frame"});
  return out;
}

inline Scene load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str());
}

inline void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(Errc::Io, "write failed for " + path);
}

inline void save_scene(const std::string& path, const Scene& s) { save_text(path, format_scene(s)); }

}  // namespace ribaucour
