#pragma once

// Compact-group numerics for Torus(d), SU(2), and SO(3): closed-form
// exponential and logarithm, bi-invariant distance, adjoint action, sphere
// sampling, Cartan development of piecewise-linear algebra paths, and
// product-versus-sum gap measurements.
//
// Metric normalization: the algebra norm equals the geodesic distance to the
// identity of the exponential, with the exponential injective on the open
// ball of radius pi in every kind.  Concretely |Z| is the quaternion angle
// for SU(2) (half the rotation angle of its SO(3) image) and the rotation
// angle for SO(3).

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "looplab/rng.hpp"

namespace looplab {

inline constexpr double kLgPi = 3.14159265358979323846;

// Principal-branch logarithm requested at (or numerically on) the cut locus.
class BranchError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

enum class GroupTag { Torus, SU2, SO3 };

struct GroupKind {
    GroupTag tag = GroupTag::SU2;
    int dim = 3;

    static GroupKind torus(int d) {
        if (d < 1) throw std::invalid_argument("GroupKind: torus dimension must be >= 1");
        return {GroupTag::Torus, d};
    }
    static GroupKind su2() { return {GroupTag::SU2, 3}; }
    static GroupKind so3() { return {GroupTag::SO3, 3}; }
};

using AlgebraVec = std::vector<double>;

inline double algebra_norm(const AlgebraVec& z) {
    double s = 0.0;
    for (const double c : z) s += c * c;
    return std::sqrt(s);
}

inline AlgebraVec algebra_add(const AlgebraVec& a, const AlgebraVec& b) {
    AlgebraVec r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

inline AlgebraVec algebra_scale(double c, const AlgebraVec& a) {
    AlgebraVec r = a;
    for (double& v : r) v *= c;
    return r;
}

struct Quat {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

    friend Quat operator*(const Quat& a, const Quat& b) {
        return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
                a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
    }
    Quat conjugated() const { return {w, -x, -y, -z}; }
    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
    void normalize() {
        const double n = norm();
        w /= n;
        x /= n;
        y /= n;
        z /= n;
    }
};

// Torus elements live in angles (one per dimension, wrapped to (-pi, pi]);
// SU2/SO3 elements in a unit quaternion, SO3 canonicalized to w >= 0.
struct GroupElem {
    std::vector<double> angles;
    Quat q;
};

inline double wrap_angle(double a) {
    const double r = std::remainder(a, 2.0 * kLgPi);
    return r <= -kLgPi ? r + 2.0 * kLgPi : r;
}

namespace detail {

inline void canonicalize_so3(Quat& q) {
    if (q.w < 0.0 ||
        (q.w == 0.0 && (q.x < 0.0 || (q.x == 0.0 && (q.y < 0.0 || (q.y == 0.0 && q.z < 0.0)))))) {
        q.w = -q.w;
        q.x = -q.x;
        q.y = -q.y;
        q.z = -q.z;
    }
}

}  // namespace detail

inline GroupElem identity(const GroupKind& kind) {
    GroupElem g;
    if (kind.tag == GroupTag::Torus) g.angles.assign(kind.dim, 0.0);
    return g;
}

inline GroupElem mul(const GroupKind& kind, const GroupElem& a, const GroupElem& b) {
    GroupElem r;
    if (kind.tag == GroupTag::Torus) {
        r.angles.resize(kind.dim);
        for (int i = 0; i < kind.dim; ++i) r.angles[i] = wrap_angle(a.angles[i] + b.angles[i]);
        return r;
    }
    r.q = a.q * b.q;
    r.q.normalize();
    if (kind.tag == GroupTag::SO3) detail::canonicalize_so3(r.q);
    return r;
}

inline GroupElem inverse(const GroupKind& kind, const GroupElem& g) {
    GroupElem r;
    if (kind.tag == GroupTag::Torus) {
        r.angles.resize(kind.dim);
        for (int i = 0; i < kind.dim; ++i) r.angles[i] = wrap_angle(-g.angles[i]);
        return r;
    }
    r.q = g.q.conjugated();
    if (kind.tag == GroupTag::SO3) detail::canonicalize_so3(r.q);
    return r;
}

inline GroupElem exp_g(const GroupKind& kind, const AlgebraVec& z) {
    if (static_cast<int>(z.size()) != kind.dim)
        throw std::invalid_argument("exp_g: algebra vector has wrong dimension");
    GroupElem g;
    if (kind.tag == GroupTag::Torus) {
        g.angles.resize(kind.dim);
        for (int i = 0; i < kind.dim; ++i) g.angles[i] = wrap_angle(z[i]);
        return g;
    }
    const double theta = algebra_norm(z);
    if (kind.tag == GroupTag::SU2) {
        // quaternion angle = |Z|
        const double s = theta < 1e-8 ? 1.0 - theta * theta / 6.0 : std::sin(theta) / theta;
        g.q = {std::cos(theta), s * z[0], s * z[1], s * z[2]};
    } else {
        // rotation angle = |Z|, quaternion angle = |Z|/2
        const double h = 0.5 * theta;
        const double s = theta < 1e-8 ? 0.5 - theta * theta / 48.0 : std::sin(h) / theta;
        g.q = {std::cos(h), s * z[0], s * z[1], s * z[2]};
        detail::canonicalize_so3(g.q);
    }
    g.q.normalize();
    return g;
}

inline AlgebraVec log_g(const GroupKind& kind, const GroupElem& g) {
    if (kind.tag == GroupTag::Torus) {
        for (const double a : g.angles) {
            if (std::abs(a) >= kLgPi - 1e-12)
                throw BranchError("log_g: torus angle at the cut locus");
        }
        return g.angles;
    }
    const double nv = std::sqrt(g.q.x * g.q.x + g.q.y * g.q.y + g.q.z * g.q.z);
    if (kind.tag == GroupTag::SU2) {
        if (g.q.w < 0.0 && nv <= 1e-12)
            throw BranchError("log_g: SU2 element at the cut locus (-1)");
        const double angle = std::atan2(nv, g.q.w);
        const double scale = nv < 1e-12 ? 1.0 : angle / nv;
        return {scale * g.q.x, scale * g.q.y, scale * g.q.z};
    }
    const double w = std::abs(g.q.w);  // sign-insensitive
    if (w <= 1e-12) throw BranchError("log_g: SO3 rotation by pi is at the cut locus");
    const double angle = 2.0 * std::atan2(nv, w);
    const double scale = nv < 1e-12 ? 2.0 : angle / nv;
    const double sgn = g.q.w < 0.0 ? -1.0 : 1.0;  // fold back to the w >= 0 sheet
    return {sgn * scale * g.q.x, sgn * scale * g.q.y, sgn * scale * g.q.z};
}

inline double group_distance(const GroupKind& kind, const GroupElem& g, const GroupElem& h) {
    if (kind.tag == GroupTag::Torus) {
        double s = 0.0;
        for (int i = 0; i < kind.dim; ++i) {
            const double d = std::remainder(g.angles[i] - h.angles[i], 2.0 * kLgPi);
            s += d * d;
        }
        return std::sqrt(s);
    }
    const Quat q = g.q.conjugated() * h.q;
    const double nv = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
    if (kind.tag == GroupTag::SU2) return std::atan2(nv, q.w);
    return 2.0 * std::atan2(nv, std::abs(q.w));
}

inline GroupElem conj(const GroupKind& kind, const GroupElem& g, const GroupElem& h) {
    return mul(kind, mul(kind, g, h), inverse(kind, g));
}

// Ad_g Z = log(g exp(Z) g^-1), in closed form: the identity on a torus, the
// SO(3) rotation of the coordinate vector for the quaternion kinds.
inline AlgebraVec adjoint(const GroupKind& kind, const GroupElem& g, const AlgebraVec& z) {
    if (static_cast<int>(z.size()) != kind.dim)
        throw std::invalid_argument("adjoint: algebra vector has wrong dimension");
    if (kind.tag == GroupTag::Torus) return z;
    const double w = g.q.w, rx = g.q.x, ry = g.q.y, rz = g.q.z;
    // v' = v + 2 w (r x v) + 2 r x (r x v)
    const double cx1 = ry * z[2] - rz * z[1];
    const double cy1 = rz * z[0] - rx * z[2];
    const double cz1 = rx * z[1] - ry * z[0];
    const double cx2 = ry * cz1 - rz * cy1;
    const double cy2 = rz * cx1 - rx * cz1;
    const double cz2 = rx * cy1 - ry * cx1;
    return {z[0] + 2.0 * (w * cx1 + cx2), z[1] + 2.0 * (w * cy1 + cy2),
            z[2] + 2.0 * (w * cz1 + cz2)};
}

// Uniform point on the sphere of the given radius in the algebra.
inline AlgebraVec sphere_sample(const GroupKind& kind, double radius, Philox& rng) {
    if (!(radius > 0.0)) throw std::invalid_argument("sphere_sample: radius must be positive");
    const std::vector<double> dir = sphere_direction(rng, kind.dim);
    AlgebraVec z(kind.dim);
    for (int i = 0; i < kind.dim; ++i) z[i] = radius * dir[i];
    return z;
}

// Haar-uniform group element (test utility).
inline GroupElem haar_sample(const GroupKind& kind, Philox& rng) {
    GroupElem g;
    if (kind.tag == GroupTag::Torus) {
        g.angles.resize(kind.dim);
        for (int i = 0; i < kind.dim; ++i) g.angles[i] = wrap_angle(kLgPi * (2.0 * uniform01(rng) - 1.0));
        return g;
    }
    double n2 = 0.0;
    do {
        g.q = {normal01(rng), normal01(rng), normal01(rng), normal01(rng)};
        n2 = g.q.norm();
    } while (n2 < 1e-6);
    g.q.normalize();
    if (kind.tag == GroupTag::SO3) detail::canonicalize_so3(g.q);
    return g;
}

// Cartan development of a piecewise-linear algebra path given by its node
// values: y[0] = 1, y[i] = y[i-1] * exp(gamma[i] - gamma[i-1]).
inline std::vector<GroupElem> develop(const GroupKind& kind, const std::vector<AlgebraVec>& gamma) {
    if (gamma.empty()) throw std::invalid_argument("develop: empty path");
    std::vector<GroupElem> y;
    y.reserve(gamma.size());
    y.push_back(identity(kind));
    for (std::size_t i = 1; i < gamma.size(); ++i) {
        AlgebraVec dz(kind.dim);
        for (int c = 0; c < kind.dim; ++c) dz[c] = gamma[i][c] - gamma[i - 1][c];
        y.push_back(mul(kind, y.back(), exp_g(kind, dz)));
    }
    return y;
}

inline GroupElem develop_endpoint(const GroupKind& kind, const std::vector<AlgebraVec>& gamma) {
    return develop(kind, gamma).back();
}

// d_G( prod_i exp(X_i), exp(sum_i X_i) ).
inline double prod_vs_sum_gap(const GroupKind& kind, const std::vector<AlgebraVec>& xs) {
    AlgebraVec total(kind.dim, 0.0);
    GroupElem prod = identity(kind);
    for (const AlgebraVec& x : xs) {
        total = algebra_add(total, x);
        prod = mul(kind, prod, exp_g(kind, x));
    }
    return group_distance(kind, prod, exp_g(kind, total));
}

struct TreeReport {
    GroupElem value;                 // product of exp(X_i), evaluated by subtree recursion
    std::vector<double> level_gaps;  // root-to-leaves: d_G of consecutive level products
};

// Divide-and-conquer product: leaves hold the X_i in order; each internal
// vertex covers up to `branching` children.  Level j replaces every vertex at
// depth j by exp(sum of the leaves below it); the reported gaps measure how
// the product changes from one level to the next, from the root (exp of the
// full sum) down to the leaves (the exact ordered product).
inline TreeReport tree_product(const GroupKind& kind, const std::vector<AlgebraVec>& xs,
                               int branching) {
    if (branching < 2) throw std::invalid_argument("tree_product: branching must be >= 2");
    if (xs.empty()) throw std::invalid_argument("tree_product: empty input");

    // levels[0] = leaves; chunk upward until a single root remains
    std::vector<std::vector<AlgebraVec>> levels{xs};
    while (levels.back().size() > 1) {
        const std::vector<AlgebraVec>& cur = levels.back();
        std::vector<AlgebraVec> up;
        up.reserve((cur.size() + branching - 1) / branching);
        for (std::size_t i = 0; i < cur.size(); i += branching) {
            AlgebraVec s(kind.dim, 0.0);
            for (std::size_t j = i; j < cur.size() && j < i + branching; ++j)
                s = algebra_add(s, cur[j]);
            up.push_back(std::move(s));
        }
        levels.push_back(std::move(up));
    }

    const auto level_product = [&](const std::vector<AlgebraVec>& vs) {
        GroupElem p = identity(kind);
        for (const AlgebraVec& v : vs) p = mul(kind, p, exp_g(kind, v));
        return p;
    };

    TreeReport report;
    GroupElem prev = level_product(levels.back());  // root: exp of the total sum
    for (std::size_t l = levels.size() - 1; l-- > 0;) {
        const GroupElem cur = level_product(levels[l]);
        report.level_gaps.push_back(group_distance(kind, prev, cur));
        prev = cur;
    }

    // independent evaluation by subtree recursion (bracketed product)
    const std::function<GroupElem(std::size_t, std::size_t)> eval =
        [&](std::size_t lo, std::size_t hi) -> GroupElem {
        if (hi - lo == 1) return exp_g(kind, xs[lo]);
        // chunk size at this subtree: smallest power of branching covering the span
        std::size_t chunk = 1;
        while (chunk * branching < hi - lo) chunk *= branching;
        GroupElem p = identity(kind);
        for (std::size_t i = lo; i < hi; i += chunk) p = mul(kind, p, eval(i, std::min(hi, i + chunk)));
        return p;
    };
    report.value = eval(0, xs.size());
    return report;
}

}  // namespace looplab
