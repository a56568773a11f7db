#pragma once

// Structured-text reports: ordered JSON, keys in a fixed order so two runs on
// the same scene produce identical text.

#include <string>
#include <vector>

#include <json.hpp>

#include "channel_spherical.hpp"

namespace ribaucour {

using Report = nlohmann::ordered_json;

inline Report vec_report(const Eigen::VectorXd& v) {
  Report a = Report::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline std::string_view signature_name(SystemSignature s) { return s == SystemSignature::s21 ? "(2,1)" : "(1,2)"; }

inline Report congruence_report(const RCongruence& r, const Tolerances& tol = {}) {
  Report out;
  CongruenceReport rep = validate(r, tol);
  out["valid"] = rep.ok();
  Report faces = Report::array();
  std::size_t bad = 0;
  for (const FaceReport& f : rep.faces) {
    Report x;
    x["face"] = f.face;
    x["ok"] = f.ok;
    if (f.ok) {
      x["signature"] = signature_name(f.signature);
      x["delta"] = f.delta;
      if (std::isfinite(f.cross_ratio)) x["cross_ratio"] = f.cross_ratio;
      if (f.face_class) x["class"] = face_class_name(*f.face_class);
    } else {
      ++bad;
      x["error"] = errc_name(*f.error);
      x["message"] = f.message;
    }
    faces.push_back(x);
  }
  out["failed_faces"] = bad;
  out["faces"] = faces;
  if (!rep.ok()) return out;

  if (auto fx = detect_fixed_complex(r, tol)) {
    out["fixed_complex"] = Report{{"kind", kind_name(fx->complex.kind)}, {"rep", vec_report(fx->complex.rep)},
                                  {"complement_dim", fx->complement_dim}};
  } else {
    out["fixed_complex"] = nullptr;
  }
  try {
    auto ml = moutard_lift(r, tol);
    out["moutard_lift"] = ml ? Report{{"found", true}, {"residual", ml->residual}} : Report{{"found", false}};
  } catch (const Error& e) {
    out["moutard_lift"] = Report{{"found", false}, {"error", e.what()}};
  }
  try {
    auto ml = multi_r_lift(r, tol);
    out["multi_lift"] = ml ? Report{{"found", true}, {"residual", ml->residual}} : Report{{"found", false}};
  } catch (const Error& e) {
    out["multi_lift"] = Report{{"found", false}, {"error", e.what()}};
  }
  ConstantCurvatureVerdict cc = detect_constant_curvature_envelope(r, tol);
  out["constant_curvature_envelope"] =
      Report{{"detected", cc.ok}, {"ribbon_spread", cc.ribbon_spread}, {"reason", cc.reason}};
  TwoChannelVerdict tc = detect_two_channel(r, tol);
  out["two_channel"] = Report{{"detected", tc.ok}, {"ribbon_spread", tc.ribbon_spread}, {"reason", tc.reason}};
  return out;
}

inline Report lines_report(const std::vector<LineVerdict>& v) {
  Report a = Report::array();
  for (const LineVerdict& l : v) {
    Report x{{"line", l.line}, {"spherical", l.spherical}, {"spread", l.spread}};
    if (l.decoded)
      x["sphere"] = Report{{"center", vec_report(l.decoded->center)}, {"radius", l.decoded->R}, {"angle", l.decoded->gamma}};
    if (!l.error.empty()) x["note"] = l.error;
    a.push_back(x);
  }
  return a;
}

inline Report envelope_report(const LegendreMap& f, const MoebiusFrame& frame, const Tolerances& tol = {}) {
  Report out;
  LegendreReport lr = validate_legendre(f, frame, tol);
  std::size_t bad = 0;
  Report edges = Report::array();
  for (EdgeId e = 0; e < lr.edge_error.size(); ++e)
    if (lr.edge_error[e]) {
      ++bad;
      edges.push_back(Report{{"edge", e}, {"error", errc_name(*lr.edge_error[e])}});
    }
  out["valid"] = bad == 0;
  out["failed_edges"] = edges;
  double circ = 0.0;
  for (double c : lr.circularity) circ = std::max(circ, c);
  out["worst_circularity"] = circ;
  if (bad) return out;
  for (int dir : {1, 2}) {
    ChannelVerdict c = channel_check(f, dir, tol);
    out["channel_" + std::to_string(dir)] = Report{{"channel", c.channel}, {"constancy", c.constancy}, {"reason", c.reason}};
  }
  out["spherical_lines_1"] = lines_report(detect_spherical_lines(f, frame, 1, tol));
  out["spherical_lines_2"] = lines_report(detect_spherical_lines(f, frame, 2, tol));
  return out;
}

inline Report envelope_check_report(const EnvelopeReport& e, const Tolerances& tol = {}) {
  return Report{{"ok", e.ok(tol)}, {"membership", e.membership}, {"inversion", e.inversion}, {"swap", e.swap},
                {"worst_face", e.worst_face}};
}

}  // namespace ribaucour
