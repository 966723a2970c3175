#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace newslens {

// Per-token representation rows (L x D) with an inclusion mask. Both the
// static-embedding pathway and the encoder pathway produce this shape.
struct TokenMatrix {
    Eigen::MatrixXd rows;
    std::vector<std::uint8_t> mask;  // 1 = included

    Eigen::Index length() const { return rows.rows(); }
    Eigen::Index dim() const { return rows.cols(); }
};

// Arithmetic mean over rows with mask = 1. When no row is masked in, returns
// a zero vector and sets *empty_pool when provided.
Eigen::VectorXd gap_pool(const TokenMatrix& m, bool* empty_pool = nullptr);

}  // namespace newslens
