#include "rotolab/maps.hpp"

#include <cmath>
#include <sstream>

namespace rotolab {

namespace {
constexpr double kOverflow = 1e12;
constexpr double kPi = 3.14159265358979323846;
} // namespace

CoverPoint LiftedMap::inverse(CoverPoint p) const {
    if (!inverse_) throw std::logic_error("LiftedMap '" + label_ + "' has no inverse");
    return inverse_(p);
}

Mat2 LiftedMap::jacobian(CoverPoint p) const {
    if (jac_) return jac_(p);
    const double h = 1e-6; // fixed central-difference step
    CoverPoint xp = eval_(CoverPoint{p.x + h, p.y});
    CoverPoint xm = eval_(CoverPoint{p.x - h, p.y});
    CoverPoint yp = eval_(CoverPoint{p.x, p.y + h});
    CoverPoint ym = eval_(CoverPoint{p.x, p.y - h});
    return Mat2{(xp.x - xm.x) / (2 * h), (yp.x - ym.x) / (2 * h),
                (xp.y - xm.y) / (2 * h), (yp.y - ym.y) / (2 * h)};
}

CoverPoint iterate(const LiftedMap& F, CoverPoint p, long n) {
    for (long i = 0; i < n; ++i) {
        p = F(p);
        if (std::fabs(p.x) > kOverflow || std::fabs(p.y) > kOverflow) {
            std::ostringstream os;
            os << "orbit overflow after " << (i + 1) << " steps of '" << F.label() << "'";
            throw OrbitOverflow(os.str());
        }
    }
    return p;
}

std::vector<CoverPoint> orbit(const LiftedMap& F, CoverPoint p, long n) {
    std::vector<CoverPoint> out;
    out.reserve(static_cast<size_t>(n) + 1);
    out.push_back(p);
    for (long i = 0; i < n; ++i) {
        p = F(p);
        if (std::fabs(p.x) > kOverflow || std::fabs(p.y) > kOverflow)
            throw OrbitOverflow("orbit overflow in orbit()");
        out.push_back(p);
    }
    return out;
}

LiftedMap compose(const LiftedMap& outer, const LiftedMap& inner) {
    LiftedMap::EvalFn ev = [outer, inner](CoverPoint p) { return outer(inner(p)); };
    LiftedMap::EvalFn inv = nullptr;
    if (outer.has_inverse() && inner.has_inverse()) {
        inv = [outer, inner](CoverPoint p) { return inner.inverse(outer.inverse(p)); };
    }
    LiftedMap::JacFn jac = [outer, inner](CoverPoint p) {
        CoverPoint q = inner(p);
        return outer.jacobian(q) * inner.jacobian(p);
    };
    LiftedMap m(outer.label() + "*" + inner.label(), std::move(ev), std::move(inv), std::move(jac));
    m.params = inner.params;
    for (const auto& kv : outer.params) m.params["outer." + kv.first] = kv.second;
    return m;
}

// --- profiles -------------------------------------------------------------------

double bump_template(double r) {
    double r2 = r * r;
    if (r2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - r2));
}

double bump_template_d(double r) {
    double r2 = r * r;
    if (r2 >= 1.0) return 0.0;
    double g = 1.0 - r2;
    return bump_template(r) * (-2.0 * r / (g * g));
}

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep_integral(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 0.5 + (t - 1.0);
    double t4 = t * t * t * t;
    return t4 * (2.5 + t * (-3.0 + t));
}

double circle_profile(double s) {
    return -0.5 * std::sin(2 * kPi * s) + 0.25 * std::sin(4 * kPi * s);
}

double circle_profile_d(double s) {
    return -kPi * std::cos(2 * kPi * s) + kPi * std::cos(4 * kPi * s);
}

// --- integrable twist ------------------------------------------------------------

LiftedMap integrable_twist() {
    LiftedMap m(
        "twist",
        [](CoverPoint p) { return CoverPoint{p.x + p.y, p.y}; },
        [](CoverPoint p) { return CoverPoint{p.x - p.y, p.y}; },
        [](CoverPoint) { return Mat2{1, 1, 0, 1}; });
    return m;
}

// --- symplectic flow map ----------------------------------------------------------

LiftedMap hamiltonian_time1(const std::string& label, VectorField field, int steps) {
    if (steps < 1) throw std::invalid_argument("hamiltonian_time1: steps >= 1 required");
    auto advance = [field, steps](CoverPoint z, double direction) {
        double h = direction / steps;
        for (int s = 0; s < steps; ++s) {
            // implicit midpoint: m solves m = z + (h/2) X(m)
            double mx = z.x, my = z.y;
            for (int it = 0; it < 64; ++it) {
                double vx, vy;
                field.at(mx, my, vx, vy);
                double nx = z.x + 0.5 * h * vx;
                double ny = z.y + 0.5 * h * vy;
                double d = std::fabs(nx - mx) + std::fabs(ny - my);
                mx = nx;
                my = ny;
                if (d < 1e-15) break;
            }
            double vx, vy;
            field.at(mx, my, vx, vy);
            z = CoverPoint{z.x + h * vx, z.y + h * vy};
        }
        return z;
    };
    LiftedMap m(
        label,
        [advance](CoverPoint p) { return advance(p, 1.0); },
        [advance](CoverPoint p) { return advance(p, -1.0); });
    return m;
}

namespace {

// Rough C1 size of a field over a rectangle: sup |v| plus sup of the
// finite-difference Jacobian entries. Used only for budget rejection.
double field_c1_estimate(const VectorField& f, double x_lo, double x_hi,
                         double y_lo, double y_hi, int nx, int ny) {
    double vmax = 0.0, dmax = 0.0;
    const double h = 1e-5;
    for (int i = 0; i <= nx; ++i) {
        double x = x_lo + (x_hi - x_lo) * i / nx;
        for (int j = 0; j <= ny; ++j) {
            double y = y_lo + (y_hi - y_lo) * j / ny;
            double vx, vy, a, b, c, d, t1, t2;
            f.at(x, y, vx, vy);
            vmax = std::max(vmax, std::max(std::fabs(vx), std::fabs(vy)));
            f.at(x + h, y, a, c);
            f.at(x - h, y, t1, t2);
            a = (a - t1) / (2 * h);
            c = (c - t2) / (2 * h);
            f.at(x, y + h, b, d);
            f.at(x, y - h, t1, t2);
            b = (b - t1) / (2 * h);
            d = (d - t2) / (2 * h);
            dmax = std::max({dmax, std::fabs(a), std::fabs(b), std::fabs(c), std::fabs(d)});
        }
    }
    return vmax + dmax;
}

} // namespace

// --- boundary Morse-Smale twist ---------------------------------------------------

static VectorField f1_field(const F1Params& p) {
    double w = p.strip_width, c0 = p.c0, c1 = p.c1, p0 = p.p0, p1 = p.p1;
    VectorField f;
    f.at = [w, c0, c1, p0, p1](double x, double y, double& vx, double& vy) {
        vx = 0.0;
        vy = 0.0;
        if (std::fabs(y) < w) {
            double r = y / w;
            double mu = bump_template(r);
            double psi = y * mu;
            double psid = mu + r * bump_template_d(r);
            vx += c0 * psid * circle_profile(x - p0);
            vy -= c0 * psi * circle_profile_d(x - p0);
        }
        double z = y - 1.0;
        if (std::fabs(z) < w) {
            double r = z / w;
            double mu = bump_template(r);
            double psi = z * mu;
            double psid = mu + r * bump_template_d(r);
            vx += c1 * psid * circle_profile(x - p1);
            vy -= c1 * psi * circle_profile_d(x - p1);
        }
    };
    return f;
}

LiftedMap f1_interior_flow(const F1Params& p) {
    if (!(p.strip_width > 0.0 && p.strip_width <= 0.45))
        throw std::invalid_argument("boundary strips must have width in (0, 0.45] so they stay disjoint");
    if (p.c0 < 0 || p.c1 < 0)
        throw std::invalid_argument("boundary field amplitudes must be nonnegative");
    VectorField f = f1_field(p);
    double est = std::max(
        field_c1_estimate(f, 0.0, 1.0, -p.strip_width, p.strip_width, 96, 24),
        field_c1_estimate(f, 0.0, 1.0, 1.0 - p.strip_width, 1.0 + p.strip_width, 96, 24));
    if (est > p.c1_allowance) {
        std::ostringstream os;
        os << "boundary field C1 size " << est << " exceeds allowance " << p.c1_allowance;
        throw std::invalid_argument(os.str());
    }
    LiftedMap m = hamiltonian_time1("f1flow", f, p.flow_steps);
    m.params["c0"] = p.c0;
    m.params["c1"] = p.c1;
    m.params["p0"] = p.p0;
    m.params["p1"] = p.p1;
    m.params["strip_width"] = p.strip_width;
    return m;
}

LiftedMap exterior_dissipation(const F1Params& p) {
    if (!(p.lambda > 0.0 && p.lambda < 0.9))
        throw std::invalid_argument("exterior contraction rate must lie in (0, 0.9)");
    double lam = p.lambda, cq = p.cq;
    auto dis = [lam, cq](double y) {
        if (y >= 0.0 && y <= 1.0) return y;
        if (y > 1.0) {
            double t = y - 1.0;
            return 1.0 + t - lam * t * t / (t + cq);
        }
        double t = -y;
        return -(t - lam * t * t / (t + cq));
    };
    auto dis_d = [lam, cq](double y) {
        if (y >= 0.0 && y <= 1.0) return 1.0;
        double t = y > 1.0 ? y - 1.0 : -y;
        double s = t + cq;
        return 1.0 - lam * (t * t + 2.0 * cq * t) / (s * s);
    };
    auto inv = [dis, dis_d](double target) {
        double y = target;
        for (int it = 0; it < 80; ++it) {
            double r = dis(y) - target;
            if (std::fabs(r) < 1e-14) break;
            y -= r / dis_d(y);
        }
        return y;
    };
    LiftedMap m(
        "dissip",
        [dis](CoverPoint q) { return CoverPoint{q.x, dis(q.y)}; },
        [inv](CoverPoint q) { return CoverPoint{q.x, inv(q.y)}; },
        [dis_d](CoverPoint q) { return Mat2{1, 0, 0, dis_d(q.y)}; });
    m.params["lambda"] = p.lambda;
    m.params["cq"] = p.cq;
    return m;
}

LiftedMap boundary_morse_smale(const F1Params& p) {
    LiftedMap m = compose(exterior_dissipation(p), compose(f1_interior_flow(p), integrable_twist()));
    LiftedMap out(
        "f1",
        [m](CoverPoint q) { return m(q); },
        [m](CoverPoint q) { return m.inverse(q); });
    out.params["c0"] = p.c0;
    out.params["c1"] = p.c1;
    out.params["p0"] = p.p0;
    out.params["p1"] = p.p1;
    out.params["strip_width"] = p.strip_width;
    out.params["lambda"] = p.lambda;
    out.params["cq"] = p.cq;
    return out;
}

// --- connector ------------------------------------------------------------------

static VectorField connector_field(const ConnectorParams& p) {
    double ym = 0.5 * (p.r1 + p.r2), yh = 0.5 * (p.r2 - p.r1);
    VectorField f;
    double ca = p.center_a, cb = p.center_b, hw = p.half_width;
    double aa = p.amp_a, ab = p.amp_b;
    f.at = [ca, cb, hw, aa, ab, ym, yh](double x, double y, double& vx, double& vy) {
        vx = 0.0;
        vy = 0.0;
        double ry = (y - ym) / yh;
        if (std::fabs(ry) >= 1.0) return;
        double psi = bump_template(ry);
        double psid = bump_template_d(ry) / yh;
        auto vortex = [&](double cx, double amp) {
            double dx = x - cx;
            dx -= std::floor(dx + 0.5); // signed circle difference in [-1/2, 1/2)
            double rx = dx / hw;
            if (std::fabs(rx) >= 1.0) return;
            double phi = bump_template(rx);
            double phid = bump_template_d(rx) / hw;
            vx += amp * phi * psid;
            vy -= amp * phid * psi;
        };
        vortex(ca, aa);
        vortex(cb, ab);
    };
    return f;
}

double f1_field_c1_size(const F1Params& p) {
    VectorField f = f1_field(p);
    return std::max(
        field_c1_estimate(f, 0.0, 1.0, -p.strip_width, p.strip_width, 96, 24),
        field_c1_estimate(f, 0.0, 1.0, 1.0 - p.strip_width, 1.0 + p.strip_width, 96, 24));
}

double connector_field_c1_size(const ConnectorParams& p) {
    VectorField f = connector_field(p);
    return field_c1_estimate(f, 0.0, 1.0, p.r1, p.r2, 128, 48);
}

LiftedMap connector_shear(const ConnectorParams& p) {
    if (!(p.r1 > 0.0 && p.r2 < 1.0 && p.r1 < p.r2))
        throw std::invalid_argument("connector sub-band must satisfy 0 < r1 < r2 < 1");
    if (!(p.half_width > 0.0 && p.half_width < 0.25))
        throw std::invalid_argument("connector half_width must lie in (0, 0.25)");
    double gap = circle_dist(p.center_a, p.center_b);
    if (gap < 2.0 * p.half_width)
        throw std::invalid_argument("connector support strips overlap");
    VectorField f = connector_field(p);
    double est = field_c1_estimate(f, 0.0, 1.0, p.r1, p.r2, 128, 48);
    if (est > p.c1_allowance) {
        std::ostringstream os;
        os << "connector C1 size " << est << " exceeds allowance " << p.c1_allowance;
        throw std::invalid_argument(os.str());
    }
    LiftedMap m = hamiltonian_time1("connector", f, p.flow_steps);
    m.params["r1"] = p.r1;
    m.params["r2"] = p.r2;
    m.params["center_a"] = p.center_a;
    m.params["center_b"] = p.center_b;
    m.params["half_width"] = p.half_width;
    m.params["amp_a"] = p.amp_a;
    m.params["amp_b"] = p.amp_b;
    return m;
}

// --- bump push ------------------------------------------------------------------

LiftedMap bump_push(const BumpProfile& b) {
    if (!(b.radius > 0.0 && b.radius < 0.5))
        throw std::invalid_argument("bump radius must lie in (0, 0.5)");
    // 2.1 bounds the template derivative; keep the vertical map invertible.
    if (b.amplitude * 2.1 / b.radius > 0.8)
        throw std::invalid_argument("bump amplitude too large for its radius (not invertible)");
    double cx = b.center.x, cy = b.center.y, rad = b.radius, amp = b.amplitude;
    double sgn = b.direction >= 0 ? 1.0 : -1.0;
    auto disp = [cx, cy, rad, amp](double x, double y) {
        double dx = x - cx;
        dx -= std::floor(dx + 0.5);
        double dy = y - cy;
        double r = std::sqrt(dx * dx + dy * dy) / rad;
        return amp * bump_template(r);
    };
    LiftedMap m(
        "bump",
        [disp, sgn](CoverPoint p) { return CoverPoint{p.x, p.y + sgn * disp(p.x, p.y)}; },
        [disp, sgn](CoverPoint p) {
            double y = p.y;
            for (int it = 0; it < 100; ++it) {
                double ny = p.y - sgn * disp(p.x, y);
                if (std::fabs(ny - y) < 1e-15) { y = ny; break; }
                y = ny;
            }
            return CoverPoint{p.x, y};
        });
    m.params["center_x"] = cx;
    m.params["center_y"] = cy;
    m.params["radius"] = rad;
    m.params["amplitude"] = amp;
    m.params["direction"] = sgn;
    return m;
}

// --- dissipative height diffeomorphism --------------------------------------------

namespace {

double plateau_val(double y, double l, double r, double tau) {
    if (y <= l || y >= r) return 0.0;
    if (y < l + tau) return smoothstep((y - l) / tau);
    if (y > r - tau) return smoothstep((r - y) / tau);
    return 1.0;
}

double plateau_int(double y, double l, double r, double tau) {
    if (y <= l) return 0.0;
    if (y < l + tau) return tau * smoothstep_integral((y - l) / tau);
    if (y <= r - tau) return 0.5 * tau + (y - l - tau);
    double full = r - l - tau;
    if (y >= r) return full;
    return full - tau * smoothstep_integral((r - y) / tau);
}

} // namespace

LiftedMap vertical_contraction(int n) {
    if (n < 4)
        throw std::invalid_argument(
            "vertical_contraction requires n >= 4: for n < 4 the derivative pinch "
            "(1-1/n, 1+1/n) cannot absorb the contraction mass demanded on [-1,2] "
            "inside the support (C_-n, C_n+1)");
    const double tau = 0.4;
    const double pl = -1.4, pr = 2.4;            // contraction plateau, == 1 on [-1,2]
    const double el_lo = -n + 0.05, el_hi = -1.6; // expansion below
    const double eu_lo = 2.6, eu_hi = n + 0.95;   // expansion above
    const double beta = 0.75 / n;
    const double mass_p = pr - pl - tau;
    const double mass_e = (el_hi - el_lo - tau) + (eu_hi - eu_lo - tau);
    const double gamma = beta * mass_p / mass_e;

    auto hval = [=](double y) {
        return y - beta * plateau_int(y, pl, pr, tau) +
               gamma * (plateau_int(y, el_lo, el_hi, tau) + plateau_int(y, eu_lo, eu_hi, tau));
    };
    auto hder = [=](double y) {
        return 1.0 - beta * plateau_val(y, pl, pr, tau) +
               gamma * (plateau_val(y, el_lo, el_hi, tau) + plateau_val(y, eu_lo, eu_hi, tau));
    };
    auto hinv = [hval, hder](double target) {
        double y = target;
        for (int it = 0; it < 80; ++it) {
            double r = hval(y) - target;
            if (std::fabs(r) < 1e-14) break;
            y -= r / hder(y);
        }
        return y;
    };
    LiftedMap m(
        "hn",
        [hval](CoverPoint p) { return CoverPoint{p.x, hval(p.y)}; },
        [hinv](CoverPoint p) { return CoverPoint{p.x, hinv(p.y)}; },
        [hder](CoverPoint p) { return Mat2{1, 0, 0, hder(p.y)}; });
    m.params["n"] = n;
    return m;
}

// --- synthetic horseshoe -----------------------------------------------------------

LiftedMap synthetic_horseshoe(const SyntheticHorseshoeParams& p) {
    double e = p.expansion, drift = p.drift, c = p.contraction;
    if (e <= 2.0) throw std::invalid_argument("synthetic horseshoe needs expansion > 2");
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("contraction must lie in (0,1)");
    auto xmap = [e, drift](double x, double& X, double& slope) {
        double k = std::floor(x);
        double s = x - k;
        if (s <= 0.5) {
            X = k + e * s + drift;
            slope = e;
        } else {
            X = k + 0.5 * e + drift + (2.0 - e) * (s - 0.5);
            slope = 2.0 - e;
        }
    };
    LiftedMap m(
        "synthetic_horseshoe",
        [xmap, c](CoverPoint q) {
            double X, slope;
            xmap(q.x, X, slope);
            return CoverPoint{X, 0.5 + c * (q.y - 0.5)};
        },
        nullptr,
        [xmap, c](CoverPoint q) {
            double X, slope;
            xmap(q.x, X, slope);
            return Mat2{slope, 0, 0, c};
        });
    m.params["expansion"] = e;
    m.params["drift"] = drift;
    m.params["contraction"] = c;
    return m;
}

// --- robustness perturbation --------------------------------------------------------

LiftedMap sup_norm_perturb(const LiftedMap& F, double eta) {
    LiftedMap m(
        F.label() + "+eta",
        [F, eta](CoverPoint p) {
            CoverPoint q = F(p);
            return CoverPoint{q.x, q.y + eta * std::sin(2 * kPi * q.x + 0.37)};
        });
    m.params = F.params;
    m.params["eta"] = eta;
    return m;
}

} // namespace rotolab
