#include "effcas/moment_state.hpp"

#include <stdexcept>

namespace effcas {

MomentState::MomentState(std::vector<double> x, int order, double hbar)
    : x_(std::move(x)), order_(order), hbar_(hbar) {
    if (x_.empty()) throw std::invalid_argument("moment state needs at least one generator");
    if (order_ < 2) throw std::invalid_argument("truncation order must be >= 2");
    if (!(hbar_ > 0)) throw std::invalid_argument("hbar must be positive");
}

void MomentState::set(const MultiIndex& idx, double value) {
    if (idx.dim() != dim()) throw std::invalid_argument("moment index dimension mismatch");
    int d = idx.degree();
    if (d < 2 || d > order_) throw std::out_of_range("moment degree " + std::to_string(d) + " outside [2, order]");
    moments_[idx] = value;
}

double MomentState::moment(const MultiIndex& idx) const {
    if (idx.dim() != dim()) throw std::invalid_argument("moment index dimension mismatch");
    int d = idx.degree();
    if (d == 0) return 1.0;
    if (d == 1) return 0.0;
    if (d > order_) throw std::out_of_range("moment " + idx.to_string() + " above truncation order");
    auto it = moments_.find(idx);
    return it == moments_.end() ? 0.0 : it->second;
}

bool MomentState::has(const MultiIndex& idx) const { return moments_.count(idx) > 0; }

Eigen::MatrixXd MomentState::sigma() const {
    const int m = dim();
    Eigen::MatrixXd s(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) s(i, j) = moment(MultiIndex::unit(m, i).plus_unit(j));
    return s;
}

Eigen::VectorXd MomentState::moment_vector(int lo, int hi) const {
    auto idx = indices_in_degree_range(dim(), lo, hi);
    Eigen::VectorXd v(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) v(static_cast<Eigen::Index>(k)) = moment(idx[k]);
    return v;
}

void MomentState::set_moment_vector(int lo, int hi, const Eigen::VectorXd& v) {
    auto idx = indices_in_degree_range(dim(), lo, hi);
    if (static_cast<std::size_t>(v.size()) != idx.size()) throw std::invalid_argument("moment vector size mismatch");
    for (std::size_t k = 0; k < idx.size(); ++k) set(idx[k], v(static_cast<Eigen::Index>(k)));
}

MomentState MomentState::truncated(int order) const {
    MomentState s(x_, order, hbar_);
    for (const auto& [idx, v] : moments_)
        if (idx.degree() <= order) s.moments_[idx] = v;
    return s;
}

} // namespace effcas
