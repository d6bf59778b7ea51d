#pragma once

#include <array>
#include <cmath>
#include <string>

#include "hyprel/errors.hpp"

namespace hyprel {

// Euclidean vector in the upper half-space model. Coordinates are
// (x1, x2, y); for the half-plane (n = 1) the x2 slot stays zero.
struct Vec {
    double x1 = 0.0;
    double x2 = 0.0;
    double y = 0.0;

    Vec() = default;
    Vec(double x1, double x2, double y) : x1(x1), x2(x2), y(y) {}

    double dot(const Vec& o) const { return x1 * o.x1 + x2 * o.x2 + y * o.y; }
    double norm() const { return std::sqrt(dot(*this)); }

    Vec operator+(const Vec& o) const { return {x1 + o.x1, x2 + o.x2, y + o.y}; }
    Vec operator-(const Vec& o) const { return {x1 - o.x1, x2 - o.x2, y - o.y}; }
    Vec operator*(double s) const { return {x1 * s, x2 * s, y * s}; }
    Vec operator/(double s) const { return {x1 / s, x2 / s, y / s}; }
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

// Symmetric 3x3 matrix acting on Vec, same coordinate convention.
struct SymMat {
    std::array<std::array<double, 3>, 3> m{};

    static SymMat zero() { return {}; }
    static SymMat identity() {
        SymMat q;
        q.m[0][0] = q.m[1][1] = q.m[2][2] = 1.0;
        return q;
    }
    // v v^T for a single direction
    static SymMat outer(const Vec& v) {
        SymMat q;
        const std::array<double, 3> a{v.x1, v.x2, v.y};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) q.m[i][j] = a[i] * a[j];
        return q;
    }
    // (a b^T + b a^T)/2
    static SymMat sym_outer(const Vec& a, const Vec& b) {
        SymMat q;
        const std::array<double, 3> u{a.x1, a.x2, a.y}, w{b.x1, b.x2, b.y};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) q.m[i][j] = 0.5 * (u[i] * w[j] + w[i] * u[j]);
        return q;
    }

    Vec apply(const Vec& v) const {
        return {m[0][0] * v.x1 + m[0][1] * v.x2 + m[0][2] * v.y,
                m[1][0] * v.x1 + m[1][1] * v.x2 + m[1][2] * v.y,
                m[2][0] * v.x1 + m[2][1] * v.x2 + m[2][2] * v.y};
    }
    double quad(const Vec& v) const { return v.dot(apply(v)); }

    SymMat operator+(const SymMat& o) const {
        SymMat q;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) q.m[i][j] = m[i][j] + o.m[i][j];
        return q;
    }
    SymMat operator-(const SymMat& o) const {
        SymMat q;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) q.m[i][j] = m[i][j] - o.m[i][j];
        return q;
    }
    SymMat operator*(double s) const {
        SymMat q;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) q.m[i][j] = m[i][j] * s;
        return q;
    }
};

// Point of the open upper half-space, y > 0 strictly.
struct HalfSpacePoint {
    double x1 = 0.0;
    double x2 = 0.0;
    double y = 1.0;

    HalfSpacePoint() = default;
    HalfSpacePoint(double x, double y);              // half-plane point (n = 1)
    HalfSpacePoint(double x1, double x2, double y);  // half-space point (n = 2)

    Vec position() const { return {x1, x2, y}; }
};

/// Conformal factor of the half-space metric, 1/y^2.
double conformal_factor(const HalfSpacePoint& p);

/// Geodesic distance of the half-space metric,
/// acosh(1 + |p - q|^2 / (2 y_p y_q)).
double hyperbolic_distance(const HalfSpacePoint& p, const HalfSpacePoint& q);

// Boundary defining function. Three concrete kinds:
//   Height          r = y
//   Scaled          r = y / (1 + alpha |x - center|^2 + alpha y^2)
//   Tilted          r = y (1 + beta y)
// Each vanishes simply at {y = 0} and is comparable to y on bounded regions.
class DefiningFunction {
public:
    enum class Kind { Height, Scaled, Tilted };

    static DefiningFunction height();
    static DefiningFunction scaled(double center_x1, double center_x2, double alpha);
    static DefiningFunction tilted(double beta);  // |beta| < 1

    double operator()(const HalfSpacePoint& p) const;

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double center_x1() const { return center_x1_; }
    double center_x2() const { return center_x2_; }

    /// Invariant under rotations about the vertical axis through the origin.
    bool rotationally_symmetric() const;

    std::string describe() const;

private:
    DefiningFunction() = default;
    Kind kind_ = Kind::Height;
    double center_x1_ = 0.0, center_x2_ = 0.0;
    double alpha_ = 0.0;
    double beta_ = 0.0;
};

// Orientation-preserving isometry of the half-plane, z -> (az+b)/(cz+d)
// with ad - bc > 0. Acts on half-plane points and on boundary reals.
struct MobiusMap {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    MobiusMap() = default;
    MobiusMap(double a, double b, double c, double d);

    double det() const { return a * d - b * c; }
    MobiusMap inverse() const;

    static MobiusMap identity() { return {}; }
    static MobiusMap translation(double t) { return {1.0, t, 0.0, 1.0}; }
    static MobiusMap dilation(double s);  // s > 0

    HalfSpacePoint apply(const HalfSpacePoint& p) const;
    double apply_boundary(double x) const;  // throws MappedToInfinityError at the pole
};

MobiusMap operator*(const MobiusMap& lhs, const MobiusMap& rhs);

struct NormalFieldDiagnostics {
    double height_component;     // e_y component of X, equals y(Pi(q))^2 / R
    double divergence_estimate;  // hyperbolic divergence by central differences
};

// Normal extension field of a half-plane geodesic semicircle with ideal
// center c and radius R: project q radially onto the circle and transport
// the hyperbolic unit normal,
//   X(q) = y(Pi(q)) (q - c)/|q - c|,  Pi(q) = c + R (q - c)/|q - c|.
class NormalField {
public:
    NormalField(double center, double radius);

    Vec field(const HalfSpacePoint& q) const;
    /// Unit Euclidean normal at the projected point, (q - c)/|q - c|.
    Vec unit_direction(const HalfSpacePoint& q) const;
    NormalFieldDiagnostics diagnostics(const HalfSpacePoint& q) const;

    double center() const { return center_; }
    double radius() const { return radius_; }

private:
    double center_;
    double radius_;
};

}  // namespace hyprel
