#include "isoembed/symfun.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace isoembed {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
    for (int e : entries_)
        if (e < 0) throw PreconditionError("MultiIndex: entries must be nonnegative");
}

int MultiIndex::norm() const noexcept { return std::accumulate(entries_.begin(), entries_.end(), 0); }

int MultiIndex::max_entry() const noexcept {
    return entries_.empty() ? 0 : *std::max_element(entries_.begin(), entries_.end());
}

std::uint64_t MultiIndex::factorial() const {
    std::uint64_t f = 1;
    for (int e : entries_) f *= isoembed::factorial(e);
    return f;
}

MultiIndex MultiIndex::deleted(std::size_t i) const {
    return MultiIndex(delete_coordinate(std::span<const int>(entries_), i));
}

std::uint64_t factorial(int k) {
    if (k < 0 || k > 20) throw PreconditionError("factorial: argument must lie in [0, 20]");
    std::uint64_t f = 1;
    for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

std::uint64_t multinomial(int k, const MultiIndex& gamma) {
    if (k > 20) throw PreconditionError("multinomial: k must not exceed 20");
    if (gamma.norm() != k)
        throw PreconditionError("multinomial: |gamma| = " + std::to_string(gamma.norm()) +
                                " does not match k = " + std::to_string(k));
    // product of binomials avoids the k! overflow for k close to 20
    unsigned __int128 result = 1;
    int placed = 0;
    for (int e : gamma.entries()) {
        for (int j = 1; j <= e; ++j) {
            ++placed;
            result = result * static_cast<unsigned>(placed) / static_cast<unsigned>(j);
        }
    }
    return static_cast<std::uint64_t>(result);
}

namespace {

void fill_indices(std::vector<int>& cur, std::size_t pos, int remaining, std::vector<MultiIndex>& out) {
    if (pos + 1 == cur.size()) {
        cur[pos] = remaining;
        out.emplace_back(cur);
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        cur[pos] = v;
        fill_indices(cur, pos + 1, remaining - v, out);
    }
}

} // namespace

std::vector<MultiIndex> multi_indices(std::size_t n, int total) {
    if (total < 0) throw PreconditionError("multi_indices: total must be nonnegative");
    std::vector<MultiIndex> out;
    if (n == 0) {
        if (total == 0) out.emplace_back();
        return out;
    }
    std::vector<int> cur(n, 0);
    fill_indices(cur, 0, total, out);
    return out;
}

std::pair<std::int64_t, std::int64_t> gamma_inequality_sides(int k, const MultiIndex& gamma) {
    if (k < 0) throw PreconditionError("gamma_inequality_sides: k must be nonnegative");
    std::vector<std::int64_t> g(gamma.entries().begin(), gamma.entries().end());
    const std::span<const std::int64_t> gs(g);
    const auto lhs = static_cast<std::int64_t>(k + 1) * sigma<std::int64_t>(k + 1, gs);
    const auto rhs = (sigma<std::int64_t>(1, gs) - k) * sigma<std::int64_t>(k, gs);
    return {lhs, rhs};
}

} // namespace isoembed
