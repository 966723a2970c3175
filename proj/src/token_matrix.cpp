#include "newslens/token_matrix.hpp"

namespace newslens {

Eigen::VectorXd gap_pool(const TokenMatrix& m, bool* empty_pool) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(m.dim());
    std::size_t count = 0;
    for (Eigen::Index l = 0; l < m.length(); ++l) {
        if (l < static_cast<Eigen::Index>(m.mask.size()) && m.mask[l]) {
            sum += m.rows.row(l).transpose();
            ++count;
        }
    }
    if (empty_pool) *empty_pool = (count == 0);
    if (count == 0) return sum;
    return sum / static_cast<double>(count);
}

}  // namespace newslens
