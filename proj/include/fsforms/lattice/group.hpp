#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <string>
#include <string_view>

namespace fsforms::lattice {

enum class GroupKind { u1, su2 };

/// Compact gauge group acting on its algebra R^dim. Elements of both groups
/// are stored as unit quaternions; u1 is the subgroup of rotations about z.
/// su2 uses the bracket [a,b] = a x b, so Ad(exp X) is the rotation by |X|
/// about X.
class Group {
public:
    using Element = Eigen::Quaterniond;

    /// Builds the group and checks antisymmetry and Jacobi of its structure
    /// constants.
    static Group make(GroupKind kind);
    static Group parse(std::string_view name);

    GroupKind kind() const { return kind_; }
    std::string_view name() const { return kind_ == GroupKind::u1 ? "u1" : "su2"; }
    int dim() const { return kind_ == GroupKind::u1 ? 1 : 3; }

    /// Structure constant f^c_{ab}: [e_a, e_b] = f^c_{ab} e_c.
    double structure(int a, int b, int c) const;

    Eigen::VectorXd bracket(const Eigen::Ref<const Eigen::VectorXd>& a,
                            const Eigen::Ref<const Eigen::VectorXd>& b) const;
    /// Matrix of ad_a.
    Eigen::MatrixXd ad(const Eigen::Ref<const Eigen::VectorXd>& a) const;
    /// Matrix of Ad_g on the algebra.
    Eigen::MatrixXd Ad(const Element& g) const;

    Element exp(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    /// Principal logarithm (rotation angle in [0, pi]).
    Eigen::VectorXd log(const Element& g) const;

private:
    explicit Group(GroupKind k) : kind_(k) {}
    GroupKind kind_;
};

}  // namespace fsforms::lattice
