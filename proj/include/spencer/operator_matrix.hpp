#pragma once

#include <compare>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spencer/error.hpp"
#include "spencer/lie_core.hpp"

namespace spencer {

/// (form degree p, symmetric degree q) of a block Ω^p ⊗ Sym^q.
struct Bidegree {
    int form = 0;
    int sym = 0;

    friend auto operator<=>(const Bidegree&, const Bidegree&) = default;
};

[[nodiscard]] inline std::string to_string(const Bidegree& b) {
    return "(" + std::to_string(b.form) + "," + std::to_string(b.sym) + ")";
}

/// Direct sum of bidegree blocks over a mesh with `slots` nodes (p = 0) or
/// edges (p = 1). A block stores slot-major: index = slot * fiber + j.
class GradedSpace {
public:
    GradedSpace() = default;
    GradedSpace(std::vector<Bidegree> blocks, int slots, int lie_dim)
        : blocks_(std::move(blocks)), slots_(slots), lie_dim_(lie_dim) {}

    [[nodiscard]] const std::vector<Bidegree>& blocks() const noexcept { return blocks_; }
    [[nodiscard]] int slots() const noexcept { return slots_; }
    [[nodiscard]] int lie_dim() const noexcept { return lie_dim_; }

    [[nodiscard]] Eigen::Index fiber(const Bidegree& b) const {
        return static_cast<Eigen::Index>(sym_space_dim(b.sym, lie_dim_));
    }

    [[nodiscard]] Eigen::Index block_size(const Bidegree& b) const { return slots_ * fiber(b); }

    [[nodiscard]] bool contains(const Bidegree& b) const {
        for (const auto& x : blocks_)
            if (x == b) return true;
        return false;
    }

    [[nodiscard]] Eigen::Index offset(const Bidegree& b) const {
        Eigen::Index off = 0;
        for (const auto& x : blocks_) {
            if (x == b) return off;
            off += block_size(x);
        }
        fail(ErrorKind::input, "bidegree " + to_string(b) + " not in space");
    }

    [[nodiscard]] Eigen::Index size() const {
        Eigen::Index n = 0;
        for (const auto& x : blocks_) n += block_size(x);
        return n;
    }

    friend bool operator==(const GradedSpace& a, const GradedSpace& b) {
        return a.blocks_ == b.blocks_ && a.slots_ == b.slots_ && a.lie_dim_ == b.lie_dim_;
    }

private:
    std::vector<Bidegree> blocks_;
    int slots_ = 0;
    int lie_dim_ = 3;
};

/// Dense matrix between two graded spaces.
struct OperatorMatrix {
    GradedSpace domain;
    GradedSpace codomain;
    Eigen::MatrixXd entries;

    OperatorMatrix() = default;
    OperatorMatrix(GradedSpace dom, GradedSpace cod)
        : domain(std::move(dom)), codomain(std::move(cod)),
          entries(Eigen::MatrixXd::Zero(codomain.size(), domain.size())) {}
    OperatorMatrix(GradedSpace dom, GradedSpace cod, Eigen::MatrixXd m)
        : domain(std::move(dom)), codomain(std::move(cod)), entries(std::move(m)) {
        if (entries.rows() != codomain.size() || entries.cols() != domain.size()) {
            fail(ErrorKind::assembly, "operator entries do not match labelled block dimensions");
        }
    }

    [[nodiscard]] Eigen::Index rows() const noexcept { return entries.rows(); }
    [[nodiscard]] Eigen::Index cols() const noexcept { return entries.cols(); }
};

[[nodiscard]] inline double max_abs_difference(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        fail(ErrorKind::input, "max_abs_difference: shape mismatch");
    }
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace spencer
