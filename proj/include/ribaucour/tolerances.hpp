#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ribaucour {

// Every threshold is relative to auxiliary Euclidean norms of the inputs.
struct Tolerances {
  double light = 1e-9;    // |<x,x>| <= light * |x|^2
  double proj = 1e-9;     // projective equality of unit representatives
  double rank = 1e-8;     // relative singular value cut-off
  double contact = 1e-8;  // oriented contact |<x,y>| <= contact * |x||y|
  double closure = 1e-8;  // envelope / net consistency gate
  double zero = 1e-14;    // a representative must have norm above this
};

enum class Errc {
  ZeroVector,
  ParabolicComplex,
  LightlikeComplex,
  TangentSpheres,
  DegenerateConfiguration,
  RankNot3,
  NotCoplanar,
  DegenerateBasis,
  DegenerateDenominator,
  SphereInComplex,
  NotLightlike,
  Plane,
  NotElliptic,
  PlaneComplex,
  DisjointElements,
  EqualElements,
  DegenerateElement,
  NotIsotropic,
  BadId,
  KernelDegenerate,
  InvalidLambda,
  TangencyCreated,
  UmbilicFace,
  DegenerateChoice,
  LightlikeDiagonal,
  SphereNotInElement,
  ClosureFailure,
  PointSphereInput,
  NotAPair,
  InconsistentPartner,
  WrongSignature,
  RankDefect,
  IntersectionDegenerate,
  CircularQuadruple,
  NotTwoChannel,
  UnsupportedFrame,
  Parse,
  Io,
};

inline std::string_view errc_name(Errc e) {
  switch (e) {
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::ParabolicComplex: return "ParabolicComplex";
    case Errc::LightlikeComplex: return "LightlikeComplex";
    case Errc::TangentSpheres: return "TangentSpheres";
    case Errc::DegenerateConfiguration: return "DegenerateConfiguration";
    case Errc::RankNot3: return "RankNot3";
    case Errc::NotCoplanar: return "NotCoplanar";
    case Errc::DegenerateBasis: return "DegenerateBasis";
    case Errc::DegenerateDenominator: return "DegenerateDenominator";
    case Errc::SphereInComplex: return "SphereInComplex";
    case Errc::NotLightlike: return "NotLightlike";
    case Errc::Plane: return "Plane";
    case Errc::NotElliptic: return "NotElliptic";
    case Errc::PlaneComplex: return "PlaneComplex";
    case Errc::DisjointElements: return "DisjointElements";
    case Errc::EqualElements: return "EqualElements";
    case Errc::DegenerateElement: return "DegenerateElement";
    case Errc::NotIsotropic: return "NotIsotropic";
    case Errc::BadId: return "BadId";
    case Errc::KernelDegenerate: return "KernelDegenerate";
    case Errc::InvalidLambda: return "InvalidLambda";
    case Errc::TangencyCreated: return "TangencyCreated";
    case Errc::UmbilicFace: return "UmbilicFace";
    case Errc::DegenerateChoice: return "DegenerateChoice";
    case Errc::LightlikeDiagonal: return "LightlikeDiagonal";
    case Errc::SphereNotInElement: return "SphereNotInElement";
    case Errc::ClosureFailure: return "ClosureFailure";
    case Errc::PointSphereInput: return "PointSphereInput";
    case Errc::NotAPair: return "NotAPair";
    case Errc::InconsistentPartner: return "InconsistentPartner";
    case Errc::WrongSignature: return "WrongSignature";
    case Errc::RankDefect: return "RankDefect";
    case Errc::IntersectionDegenerate: return "IntersectionDegenerate";
    case Errc::CircularQuadruple: return "CircularQuadruple";
    case Errc::NotTwoChannel: return "NotTwoChannel";
    case Errc::UnsupportedFrame: return "UnsupportedFrame";
    case Errc::Parse: return "Parse";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ribaucour
