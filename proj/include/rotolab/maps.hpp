#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rotolab/cover.hpp"
#include "rotolab/errors.hpp"
#include "rotolab/mat2.hpp"

namespace rotolab {

// A lift of an annulus homeomorphism: commutes with the deck translation
// (x,y) -> (x+1,y). Evaluation happens on the cover; the abscissa is never
// reduced mod 1 by the map itself.
class LiftedMap {
public:
    using EvalFn = std::function<CoverPoint(CoverPoint)>;
    using JacFn = std::function<Mat2(CoverPoint)>;

    LiftedMap() = default;
    LiftedMap(std::string label, EvalFn eval, EvalFn inverse = nullptr, JacFn jac = nullptr)
        : label_(std::move(label)), eval_(std::move(eval)),
          inverse_(std::move(inverse)), jac_(std::move(jac)) {}

    CoverPoint operator()(CoverPoint p) const { return eval_(p); }

    // Apply on the annulus; the circle coordinate is canonicalized to [0,1)
    // after the map is applied.
    AnnulusPoint map(AnnulusPoint a) const {
        return project(eval_(CoverPoint{a.x, a.y}));
    }

    bool has_inverse() const { return static_cast<bool>(inverse_); }
    CoverPoint inverse(CoverPoint p) const;

    // Central finite differences with fixed step h = 1e-6 unless the family
    // supplied an analytic Jacobian.
    Mat2 jacobian(CoverPoint p) const;

    const std::string& label() const { return label_; }

    std::map<std::string, double> params;

private:
    std::string label_;
    EvalFn eval_;
    EvalFn inverse_;
    JacFn jac_;
};

// n-fold composition applied to a point; signals OrbitOverflow when a
// coordinate magnitude exceeds 1e12.
CoverPoint iterate(const LiftedMap& F, CoverPoint p, long n);
std::vector<CoverPoint> orbit(const LiftedMap& F, CoverPoint p, long n);

LiftedMap compose(const LiftedMap& outer, const LiftedMap& inner);

// --- smooth profile templates -------------------------------------------------

// Standard C-infinity bump, max 1 at r = 0, support (-1,1).
double bump_template(double r);
double bump_template_d(double r); // d/dr

// C2 quintic smoothstep on [0,1] and its antiderivative (closed form).
double smoothstep(double t);
double smoothstep_integral(double t);

// --- map families --------------------------------------------------------------

// T(x,y) = (x+y, y); analytic Jacobian and inverse.
LiftedMap integrable_twist();

// First-return-style divergence-free flow map: time-1 map of the field,
// integrated by the implicit midpoint rule (symplectic, so the Jacobian
// determinant is 1 up to solver tolerance). The field must be 1-periodic in x.
struct VectorField {
    std::function<void(double x, double y, double& vx, double& vy)> at;
};
LiftedMap hamiltonian_time1(const std::string& label, VectorField field, int steps = 8);

// Circle displacement field used on the boundary circles:
//   u(s) = -sin(2 pi s) sin^2(pi s) = -(1/2) sin(2 pi s) + (1/4) sin(4 pi s).
// Zeros: s = 0 (cubic; parabolic attractor along the circle from both sides)
// and s = 1/2 (simple; repelling, u'(1/2) = 2 pi).
double circle_profile(double s);
double circle_profile_d(double s);

struct F1Params {
    double p0 = 0.25;        // parabolic point on C0; the saddle sits at p0 + 1/2
    double p1 = 0.75;        // parabolic point on C1; saddle at p1 + 1/2
    double c0 = 0.001;       // circle field amplitude at C0
    double c1 = 0.001;       // circle field amplitude at C1
    double strip_width = 0.15; // vertical support of each boundary field
    double lambda = 0.5;     // exterior contraction strength
    double cq = 0.1;         // quadratic-tangency scale of the exterior profile
    int flow_steps = 8;
    double c1_allowance = 0.08; // rejected if the estimated C1 size exceeds this

    double x0() const { return mod1(p0 + 0.5); }
    double x1() const { return mod1(p1 + 0.5); }
};

// The boundary Morse-Smale twist: f1 = D o Phi o T where Phi is the time-1
// map of the boundary Hamiltonian fields (conservative, supported in
// |y| < w and |y-1| < w) and D the exterior dissipation (identity on [0,1]).
LiftedMap boundary_morse_smale(const F1Params& p);

// Pieces, exposed for tests and for the dissipative variant.
LiftedMap f1_interior_flow(const F1Params& p);
LiftedMap exterior_dissipation(const F1Params& p);

struct ConnectorParams {
    // Two vertical vortex rectangles inside the sub-band (r1, r2).
    double r1 = 0.12, r2 = 0.88;
    double center_a = 0.15, center_b = 0.65; // circle positions of the vortices
    double half_width = 0.12;                // x half-width of each support
    double amp_a = 0.0002, amp_b = -0.0002;  // Hamiltonian amplitudes
    int flow_steps = 8;
    double c1_allowance = 0.35;
};

// Area-preserving connector: identity outside the two rectangles, vertical
// shearing inside (Hamiltonian vortices). Rejects overlapping supports and
// C1 sizes above the allowance.
LiftedMap connector_shear(const ConnectorParams& p);

// Estimated C1 sizes of the perturbation fields (linear in the amplitudes);
// used to derive amplitudes from a C1 budget allocation.
double f1_field_c1_size(const F1Params& p);
double connector_field_c1_size(const ConnectorParams& p);

struct BumpProfile {
    AnnulusPoint center;   // on the annulus; applied to the nearest lift
    double radius = 0.05;
    double amplitude = 0.01;
    int direction = +1;    // +1 pushes up, -1 pushes down
};

LiftedMap bump_push(const BumpProfile& b);

// Height diffeomorphism of the dissipative family indexed by n: identity
// outside (-n, n+1), derivative in (1-1/n, 1+1/n) everywhere and below
// 1 - 1/(2n) on [-1,2]. Requires n >= 4 (the constraint set is infeasible
// below that; see README notes on parameter ranges).
LiftedMap vertical_contraction(int n);

// Piecewise-affine rotational-horseshoe model used by the certificate tests:
// X = 4x - 1/4 on [0,1/2], folding back with slope -2 on [1/2,1] (degree one),
// Y = 1/2 + contraction (y - 1/2). Walls at x = 0 and x = 1/2 map strictly
// left of the fundamental rectangle and right of its +1 translate.
struct SyntheticHorseshoeParams {
    double expansion = 4.0;
    double drift = -0.25;
    double contraction = 0.2;
};
LiftedMap synthetic_horseshoe(const SyntheticHorseshoeParams& p = {});

// Sup-norm perturbation wrapper (used by the robustness probe): adds a fixed
// smooth deck-commuting displacement of sup-norm exactly eta after F.
LiftedMap sup_norm_perturb(const LiftedMap& F, double eta);

} // namespace rotolab
