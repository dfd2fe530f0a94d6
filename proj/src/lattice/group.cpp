#include "fsforms/lattice/group.hpp"

#include <cmath>

#include "fsforms/core/error.hpp"

namespace fsforms::lattice {

namespace {

double levi_civita(int a, int b, int c) {
    if (a == b || b == c || a == c) return 0;
    return ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
}

}  // namespace

Group Group::make(GroupKind kind) {
    Group g(kind);
    int n = g.dim();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (g.structure(a, b, c) != -g.structure(b, a, c))
                    throw Error("structure constants are not antisymmetric");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int e = 0; e < n; ++e) {
                    double s = 0;
                    for (int m = 0; m < n; ++m)
                        s += g.structure(a, b, m) * g.structure(m, c, e) +
                             g.structure(b, c, m) * g.structure(m, a, e) +
                             g.structure(c, a, m) * g.structure(m, b, e);
                    if (s != 0) throw Error("structure constants violate the Jacobi identity");
                }
    return g;
}

Group Group::parse(std::string_view name) {
    if (name == "u1") return make(GroupKind::u1);
    if (name == "su2") return make(GroupKind::su2);
    throw Error("unknown group '" + std::string(name) + "' (expected u1 or su2)");
}

double Group::structure(int a, int b, int c) const {
    return kind_ == GroupKind::u1 ? 0.0 : levi_civita(a, b, c);
}

Eigen::VectorXd Group::bracket(const Eigen::Ref<const Eigen::VectorXd>& a,
                               const Eigen::Ref<const Eigen::VectorXd>& b) const {
    if (kind_ == GroupKind::u1) return Eigen::VectorXd::Zero(1);
    return Eigen::Vector3d(a).cross(Eigen::Vector3d(b));
}

Eigen::MatrixXd Group::ad(const Eigen::Ref<const Eigen::VectorXd>& a) const {
    if (kind_ == GroupKind::u1) return Eigen::MatrixXd::Zero(1, 1);
    Eigen::Matrix3d m;
    m << 0, -a(2), a(1),
         a(2), 0, -a(0),
         -a(1), a(0), 0;
    return m;
}

Eigen::MatrixXd Group::Ad(const Element& g) const {
    if (kind_ == GroupKind::u1) return Eigen::MatrixXd::Identity(1, 1);
    return g.toRotationMatrix();
}

Group::Element Group::exp(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (kind_ == GroupKind::u1) return Element(Eigen::AngleAxisd(x(0), Eigen::Vector3d::UnitZ()));
    double n = x.norm();
    if (n == 0) return Element::Identity();
    return Element(Eigen::AngleAxisd(n, Eigen::Vector3d(x) / n));
}

Eigen::VectorXd Group::log(const Element& g) const {
    Element q = g.w() < 0 ? Element(-g.coeffs()) : g;
    double v = q.vec().norm();
    double angle = 2 * std::atan2(v, q.w());
    if (kind_ == GroupKind::u1) {
        Eigen::VectorXd out(1);
        out(0) = v == 0 ? 0.0 : angle * (q.z() >= 0 ? 1 : -1);
        return out;
    }
    if (v == 0) return Eigen::Vector3d::Zero();
    return angle / v * q.vec();
}

}  // namespace fsforms::lattice
