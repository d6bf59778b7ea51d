#include "hyprel/halfspace.hpp"

#include <complex>
#include <sstream>

namespace hyprel {

namespace {

void check_height(double y) {
    if (!(y > 0.0) || !std::isfinite(y))
        throw std::invalid_argument("HalfSpacePoint: height must be strictly positive");
}

}  // namespace

HalfSpacePoint::HalfSpacePoint(double x, double y) : x1(x), x2(0.0), y(y) { check_height(y); }

HalfSpacePoint::HalfSpacePoint(double x1, double x2, double y) : x1(x1), x2(x2), y(y) {
    check_height(y);
}

double conformal_factor(const HalfSpacePoint& p) { return 1.0 / (p.y * p.y); }

double hyperbolic_distance(const HalfSpacePoint& p, const HalfSpacePoint& q) {
    const Vec d = p.position() - q.position();
    return std::acosh(1.0 + d.dot(d) / (2.0 * p.y * q.y));
}

DefiningFunction DefiningFunction::height() { return DefiningFunction{}; }

DefiningFunction DefiningFunction::scaled(double center_x1, double center_x2, double alpha) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("DefiningFunction: alpha must be nonnegative");
    DefiningFunction r;
    r.kind_ = Kind::Scaled;
    r.center_x1_ = center_x1;
    r.center_x2_ = center_x2;
    r.alpha_ = alpha;
    return r;
}

DefiningFunction DefiningFunction::tilted(double beta) {
    if (!(std::abs(beta) < 1.0)) throw std::invalid_argument("DefiningFunction: need |beta| < 1");
    DefiningFunction r;
    r.kind_ = Kind::Tilted;
    r.beta_ = beta;
    return r;
}

double DefiningFunction::operator()(const HalfSpacePoint& p) const {
    switch (kind_) {
        case Kind::Height:
            return p.y;
        case Kind::Scaled: {
            const double dx1 = p.x1 - center_x1_;
            const double dx2 = p.x2 - center_x2_;
            return p.y / (1.0 + alpha_ * (dx1 * dx1 + dx2 * dx2) + alpha_ * p.y * p.y);
        }
        case Kind::Tilted:
            return p.y * (1.0 + beta_ * p.y);
    }
    return p.y;
}

bool DefiningFunction::rotationally_symmetric() const {
    if (kind_ != Kind::Scaled) return true;
    return center_x1_ == 0.0 && center_x2_ == 0.0;
}

std::string DefiningFunction::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Height:
            os << "height";
            break;
        case Kind::Scaled:
            os << "scaled(center=(" << center_x1_ << "," << center_x2_ << "),alpha=" << alpha_
               << ")";
            break;
        case Kind::Tilted:
            os << "tilted(beta=" << beta_ << ")";
            break;
    }
    return os.str();
}

MobiusMap::MobiusMap(double a, double b, double c, double d) : a(a), b(b), c(c), d(d) {
    if (!(det() > 0.0)) throw std::invalid_argument("MobiusMap: need ad - bc > 0");
}

MobiusMap MobiusMap::dilation(double s) {
    if (!(s > 0.0)) throw std::invalid_argument("MobiusMap: dilation factor must be positive");
    return {s, 0.0, 0.0, 1.0};
}

MobiusMap MobiusMap::inverse() const { return {d, -b, -c, a}; }

HalfSpacePoint MobiusMap::apply(const HalfSpacePoint& p) const {
    if (p.x2 != 0.0)
        throw std::invalid_argument("MobiusMap: acts on the half-plane only (x2 must be 0)");
    const std::complex<double> z(p.x1, p.y);
    const std::complex<double> w = (a * z + b) / (c * z + d);
    return HalfSpacePoint(w.real(), w.imag());
}

double MobiusMap::apply_boundary(double x) const {
    const double den = c * x + d;
    const double scale = std::abs(c * x) + std::abs(d) + 1.0;
    if (std::abs(den) <= 1e-14 * scale)
        throw MappedToInfinityError("MobiusMap: boundary point maps to infinity");
    return (a * x + b) / den;
}

MobiusMap operator*(const MobiusMap& lhs, const MobiusMap& rhs) {
    return {lhs.a * rhs.a + lhs.b * rhs.c, lhs.a * rhs.b + lhs.b * rhs.d,
            lhs.c * rhs.a + lhs.d * rhs.c, lhs.c * rhs.b + lhs.d * rhs.d};
}

NormalField::NormalField(double center, double radius) : center_(center), radius_(radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("NormalField: radius must be positive");
}

Vec NormalField::unit_direction(const HalfSpacePoint& q) const {
    if (q.x2 != 0.0) throw std::invalid_argument("NormalField: half-plane field (x2 must be 0)");
    const double ux = q.x1 - center_;
    const double rho = std::hypot(ux, q.y);
    if (rho <= 1e-300)
        throw UndefinedProjectionError("NormalField: projection undefined at the circle center");
    return {ux / rho, 0.0, q.y / rho};
}

Vec NormalField::field(const HalfSpacePoint& q) const {
    const Vec dir = unit_direction(q);
    const double y_proj = radius_ * dir.y;  // height of the projected point
    return dir * y_proj;
}

NormalFieldDiagnostics NormalField::diagnostics(const HalfSpacePoint& q) const {
    const Vec dir = unit_direction(q);
    const double y_proj = radius_ * dir.y;

    NormalFieldDiagnostics out;
    out.height_component = y_proj * y_proj / radius_;

    // Hyperbolic divergence div X = div_E X - 2 X_y / y, the Euclidean part
    // by central differences with a height-relative step.
    const double h = 1e-5 * q.y;
    const auto Xat = [&](double x, double y) { return field(HalfSpacePoint(x, y)); };
    const double dXx = (Xat(q.x1 + h, q.y).x1 - Xat(q.x1 - h, q.y).x1) / (2.0 * h);
    const double dXy = (Xat(q.x1, q.y + h).y - Xat(q.x1, q.y - h).y) / (2.0 * h);
    out.divergence_estimate = dXx + dXy - 2.0 * field(q).y / q.y;
    return out;
}

}  // namespace hyprel
