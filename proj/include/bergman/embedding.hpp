#ifndef BERGMAN_EMBEDDING_HPP
#define BERGMAN_EMBEDDING_HPP

#include <array>
#include <utility>
#include <vector>

#include "bergman/collar.hpp"
#include "bergman/xreal.hpp"

namespace bergman::embedding {

// Projective geometry of the collar's Bergman embedding.  The model sections
// z^a / sqrt(I_a), |a| <= cutoff, are orthonormal (distinct Fourier indices
// are exactly orthogonal), so the point over (t, theta) has homogeneous
// coordinates with squared magnitudes e^{2 a t} / I_a.  Coordinates are never
// materialised as raw magnitudes; everything works on weights relative to the
// dominant index.

using SectionFamily = collar::SectionNorms;

SectionFamily build_family(const collar::CollarParams& p, const quad::QuadSpec& spec = {});

/// Normalized squared-coordinate weights at log|z| = t: w_a proportional to
/// e^{2 a t} / I_a, kept as XReal (tiny weights underflow doubles).
std::vector<std::pair<int, XReal>> weights_at(const SectionFamily& family, double t);

/// Length of the image of the theta-circle at t under the Fubini-Study
/// metric.  For a torus-equivariant map the FS speed is constant in theta and
/// speed^2 equals the variance of the index a under the weights, so
/// length = 2 pi sqrt(Var(a)).
XReal circle_image_length(const SectionFamily& family, double t);

struct ReducedMap {
  XReal c_numeric;  // sqrt(I_0 / I_1), quadrature ground truth
  XReal c_paper;    // e^{-pi/(2 eps)} (eps k)^{-k-1/2}, the printed asymptotic
};

/// Coefficient of the two-section map [1, c z] the embedding reduces to on
/// the bubble region.  Both routes are reported; their log offset tends to a
/// k-dependent constant as epsilon -> 0.
ReducedMap reduced_map(const SectionFamily& family);
ReducedMap reduced_map(const collar::CollarParams& p, const quad::QuadSpec& spec = {});

/// Fubini-Study distance (radians, in [0, pi/2]) from the projective point
/// with the given squared-coordinate weights to the coordinate line spanned
/// by indices pair.first and pair.second:
/// arcsin(sqrt(1 - w_{a1} - w_{a2})).  Missing pair indices throw.
double line_distance(const std::vector<std::pair<int, XReal>>& weights,
                     std::pair<int, int> pair);

struct ProfileRow {
  double t = 0.0;
  std::array<std::pair<int, double>, 3> top_weights{};  // largest three, by weight
  XReal circle_length;
  XReal reduced_coordinate;   // |w| = e^t sqrt(I_0 / I_1) of the two-section map
  double line_distance = 0.0; // to the coordinate line through indices (0, 1)
};

/// Degeneration profile: n_samples rows on t in [0, t0], t0 = pi/(2 eps) +
/// log eps, endpoints included.  Throws when t0 <= 0 (epsilon too large) or
/// n_samples < 3.  The t < 0 half mirrors this one under a -> -a.
std::vector<ProfileRow> bubble_profile(const SectionFamily& family, int n_samples);
std::vector<ProfileRow> bubble_profile(const collar::CollarParams& p, int n_samples,
                                       const quad::QuadSpec& spec = {});

double bubble_t0(const collar::CollarParams& p);

}  // namespace bergman::embedding

#endif
