#pragma once

// Seeded generators for property tests.

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "spencer/lie_core.hpp"

namespace oracle {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

    Eigen::VectorXd vector(Eigen::Index n) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform();
        return v;
    }

    spencer::DualFunctional dual(int dim = 3) { return spencer::DualFunctional{vector(dim)}; }
    spencer::LieVector lie(int dim = 3) { return spencer::LieVector{vector(dim)}; }

    spencer::SymTensor tensor(int degree, int dim = 3) {
        return spencer::SymTensor(degree, dim, vector(static_cast<Eigen::Index>(spencer::sym_space_dim(degree, dim))));
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace oracle
