#pragma once

#include "amfst/consistency.hpp"
#include "amfst/core.hpp"

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace amfst {

/// A point is occluded when every candidate lands in the mask, when no candidate is usable, or when
/// the smallest usable EPE exceeds `tau`. Masked and INVALID cells are not usable.
inline std::vector<bool> occlusion_condition(const EpeMatrix& epe, const OcclusionMatrix& mask_occ, double tau) {
    if (epe.rows() != mask_occ.rows() || epe.cols() != mask_occ.cols()) {
        throw ContractViolation("EPE and occlusion matrices are not aligned");
    }
    std::vector<bool> occluded(epe.cols(), false);
    for (std::size_t p = 0; p < epe.cols(); ++p) {
        bool   all_masked = true;
        double best       = kInvalidEpe;
        for (std::size_t f = 0; f < epe.rows(); ++f) {
            if (mask_occ(f, p) != 0) {
                continue;
            }
            all_masked = false;
            best       = std::min(best, epe(f, p));
        }
        occluded[p] = all_masked || is_invalid_epe(best) || best > tau;
    }
    return occluded;
}

/// Occluded columns are set to zero (INVALID included) so they cost the same for every combination.
inline EpeMatrix zero_occluded_columns(const EpeMatrix& epe, const std::vector<bool>& occluded) {
    if (occluded.size() != epe.cols()) {
        throw ContractViolation("occlusion flags do not match the EPE matrix width");
    }
    EpeMatrix out = epe;
    for (std::size_t p = 0; p < epe.cols(); ++p) {
        if (occluded[p]) {
            for (std::size_t f = 0; f < epe.rows(); ++f) {
                out(f, p) = 0.0;
            }
        }
    }
    return out;
}

/// Both preparation steps in one pass: masked cells become INVALID, occluded columns become zero.
inline EpeMatrix selectable_epe(const EpeMatrix& epe, const OcclusionMatrix& mask_occ,
                                const std::vector<bool>& occluded) {
    if (occluded.size() != epe.cols() || mask_occ.rows() != epe.rows() || mask_occ.cols() != epe.cols()) {
        throw ContractViolation("EPE, occlusion matrix and flags are not aligned");
    }
    EpeMatrix out(epe.rows(), epe.cols());
    for (std::size_t f = 0; f < epe.rows(); ++f) {
        const auto src  = epe.row(f);
        const auto mask = mask_occ.row(f);
        auto       dst  = out.row(f);
        for (std::size_t p = 0; p < epe.cols(); ++p) {
            dst[p] = occluded[p] ? 0.0 : (mask[p] != 0 ? kInvalidEpe : src[p]);
        }
    }
    return out;
}

/// Any EPE cell whose prediction is mask-occluded becomes INVALID.
inline EpeMatrix drop_masked_cells(const EpeMatrix& epe, const OcclusionMatrix& mask_occ) {
    EpeMatrix out = epe;
    for (std::size_t f = 0; f < epe.rows(); ++f) {
        for (std::size_t p = 0; p < epe.cols(); ++p) {
            if (mask_occ(f, p) != 0) {
                out(f, p) = kInvalidEpe;
            }
        }
    }
    return out;
}

struct FrameCombination {
    std::vector<std::size_t> rows;    // indices into the candidate list, ascending
    std::vector<FrameId>     frames;  // frame ids in the same order

    friend bool operator==(const FrameCombination&, const FrameCombination&) = default;
};

/// All size-N subsets of the candidate list, in lexicographic order of member index.
inline std::vector<FrameCombination> enumerate_combinations(std::span<const FrameId> candidates, std::size_t n) {
    if (n == 0 || n > candidates.size()) {
        throw InvalidInput("combination size " + std::to_string(n) + " not in [1, " +
                           std::to_string(candidates.size()) + "]");
    }
    std::vector<FrameCombination> out;
    std::vector<std::size_t>      idx(n);
    for (std::size_t i = 0; i < n; ++i) {
        idx[i] = i;
    }
    const std::size_t m = candidates.size();
    while (true) {
        FrameCombination combo{idx, {}};
        for (std::size_t r : idx) {
            combo.frames.push_back(candidates[r]);
        }
        out.push_back(std::move(combo));
        std::size_t i = n;
        while (i > 0 && idx[i - 1] == m - n + (i - 1)) {
            --i;
        }
        if (i == 0) {
            break;
        }
        ++idx[i - 1];
        for (std::size_t k = i; k < n; ++k) {
            idx[k] = idx[k - 1] + 1;
        }
    }
    return out;
}

struct CombinationCost {
    double              total = 0.0;    // sum of finite per-point minima, accumulated in point order
    std::size_t         uncovered = 0;  // points with no usable cell inside the combination
    std::vector<double> per_point_min;  // kInvalidEpe where uncovered

    /// Coverage first, then total error.
    [[nodiscard]] bool better_than(const CombinationCost& other) const {
        if (uncovered != other.uncovered) {
            return uncovered < other.uncovered;
        }
        return total < other.total;
    }
    [[nodiscard]] bool ties(const CombinationCost& other) const {
        return uncovered == other.uncovered && total == other.total;
    }
};

inline CombinationCost combination_cost(const EpeMatrix& epe, std::span<const std::size_t> rows) {
    CombinationCost cost;
    cost.per_point_min.assign(epe.cols(), kInvalidEpe);
    for (std::size_t r : rows) {
        if (r >= epe.rows()) {
            throw ContractViolation("combination row " + std::to_string(r) + " outside the EPE matrix");
        }
    }
    for (std::size_t r : rows) {
        const auto row = epe.row(r);
        for (std::size_t p = 0; p < epe.cols(); ++p) {
            cost.per_point_min[p] = std::min(cost.per_point_min[p], row[p]);
        }
    }
    for (std::size_t p = 0; p < epe.cols(); ++p) {
        const double best = cost.per_point_min[p];
        if (is_invalid_epe(best)) {
            ++cost.uncovered;
        } else {
            cost.total += best;
        }
    }
    return cost;
}

inline CombinationCost combination_cost(const EpeMatrix& epe, const FrameCombination& combo) {
    return combination_cost(epe, std::span<const std::size_t>(combo.rows));
}

enum class SelectionStrategy { automatic, exhaustive, leave_one_out };

struct Selection {
    FrameCombination                    best;
    CombinationCost                     cost;
    std::vector<std::optional<FrameId>> assignment;      // f*(p); nullopt for occluded or uncovered points
    std::vector<std::optional<std::size_t>> assigned_row;  // row of f*(p) in the candidate list
};

namespace detail {

inline bool lexicographically_less(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

/// Exact leave-one-out search: the cost of dropping row j is assembled from each point's best and
/// second-best rows. One pass over the points feeds every candidate total, each summed in point order
/// so it matches the exhaustive sum bit for bit.
inline std::pair<std::vector<std::size_t>, CombinationCost> leave_one_out(const EpeMatrix& epe,
                                                                          const std::vector<bool>& required) {
    const std::size_t        rows = epe.rows();
    const std::size_t        cols = epe.cols();
    std::vector<double>      total(rows, 0.0);
    std::vector<std::size_t> uncovered(rows, 0);
    for (std::size_t p = 0; p < cols; ++p) {
        double      b1 = kInvalidEpe, b2 = kInvalidEpe;
        std::size_t r1 = rows;
        for (std::size_t f = 0; f < rows; ++f) {
            const double v     = epe(f, p);
            const bool   lower = v < b1;
            b2                 = lower ? b1 : std::min(b2, v);
            r1                 = lower ? f : r1;
            b1                 = lower ? v : b1;
        }
        for (std::size_t j = 0; j < rows; ++j) {
            const double v = j == r1 ? b2 : b1;
            if (is_invalid_epe(v)) {
                ++uncovered[j];
            } else {
                total[j] += v;
            }
        }
    }

    std::optional<std::size_t> best_dropped;
    for (std::size_t j = 0; j < rows; ++j) {
        if (required[j]) {
            continue;
        }
        // Dropping a later row yields the lexicographically smaller combination, so later rows win ties.
        if (!best_dropped || uncovered[j] < uncovered[*best_dropped] ||
            (uncovered[j] == uncovered[*best_dropped] && total[j] <= total[*best_dropped])) {
            best_dropped = j;
        }
    }
    CombinationCost best_cost;
    best_cost.total     = total[*best_dropped];
    best_cost.uncovered = uncovered[*best_dropped];
    best_cost.per_point_min.assign(cols, kInvalidEpe);
    for (std::size_t f = 0; f < rows; ++f) {
        if (f == *best_dropped) {
            continue;
        }
        for (std::size_t p = 0; p < cols; ++p) {
            best_cost.per_point_min[p] = std::min(best_cost.per_point_min[p], epe(f, p));
        }
    }
    std::vector<std::size_t> members;
    for (std::size_t f = 0; f < rows; ++f) {
        if (f != *best_dropped) {
            members.push_back(f);
        }
    }
    return {members, best_cost};
}

}  // namespace detail

/// Effective combination size when `required` rows must be kept. Required rows beyond `n` enlarge
/// the combination; at least one free row is still admitted whenever one exists.
inline std::size_t effective_combination_size(std::size_t n, std::size_t required, std::size_t available) {
    const std::size_t free_rows  = available - required;
    std::size_t       free_slots = n > required ? n - required : 1;
    free_slots                   = std::min(free_slots, free_rows);
    return required + free_slots;
}

/// Minimises total per-point minimum EPE over size-N combinations of the candidate rows, then assigns
/// each visible point to its best member (ties: lowest frame id). `epe` is expected to have occluded
/// columns zeroed and masked cells marked INVALID.
inline Selection select_optimal(const EpeMatrix& epe, std::span<const FrameId> candidates, std::size_t n,
                                const std::vector<bool>&     occluded      = {},
                                std::span<const std::size_t> required_rows = {},
                                SelectionStrategy            strategy      = SelectionStrategy::automatic) {
    if (candidates.size() != epe.rows()) {
        throw ContractViolation("candidate list length does not match EPE rows");
    }
    if (!occluded.empty() && occluded.size() != epe.cols()) {
        throw ContractViolation("occlusion flags do not match the EPE matrix width");
    }
    if (n == 0 || n > candidates.size()) {
        throw InvalidInput("combination size " + std::to_string(n) + " not in [1, " +
                           std::to_string(candidates.size()) + "]");
    }
    std::vector<bool> required(epe.rows(), false);
    for (std::size_t r : required_rows) {
        if (r >= epe.rows()) {
            throw ContractViolation("required row outside the candidate list");
        }
        required[r] = true;
    }
    const auto required_count = static_cast<std::size_t>(std::count(required.begin(), required.end(), true));
    const std::size_t size    = effective_combination_size(n, required_count, epe.rows());

    const bool can_leave_one_out = size + 1 == epe.rows();
    if (strategy == SelectionStrategy::leave_one_out && !can_leave_one_out) {
        throw InvalidInput("leave-one-out search needs combination size = candidates - 1");
    }
    const bool use_fast = strategy == SelectionStrategy::leave_one_out ||
                          (strategy == SelectionStrategy::automatic && can_leave_one_out);

    std::vector<std::size_t> best_rows;
    CombinationCost          best_cost;
    if (use_fast) {
        std::tie(best_rows, best_cost) = detail::leave_one_out(epe, required);
    } else {
        std::vector<FrameId>     free_ids;
        std::vector<std::size_t> free_rows, fixed_rows;
        for (std::size_t r = 0; r < epe.rows(); ++r) {
            (required[r] ? fixed_rows : free_rows).push_back(r);
            if (!required[r]) {
                free_ids.push_back(candidates[r]);
            }
        }
        const std::size_t       free_slots = size - fixed_rows.size();
        std::vector<FrameCombination> partial;
        if (free_slots == 0) {
            partial.push_back({});
        } else {
            partial = enumerate_combinations(free_ids, free_slots);
        }
        bool have = false;
        for (const auto& part : partial) {
            std::vector<std::size_t> rows = fixed_rows;
            for (std::size_t k : part.rows) {
                rows.push_back(free_rows[k]);
            }
            std::sort(rows.begin(), rows.end());
            CombinationCost cost = combination_cost(epe, rows);
            if (!have || cost.better_than(best_cost) ||
                (cost.ties(best_cost) && detail::lexicographically_less(rows, best_rows))) {
                have      = true;
                best_rows = std::move(rows);
                best_cost = std::move(cost);
            }
        }
    }

    Selection out;
    out.best.rows = best_rows;
    for (std::size_t r : best_rows) {
        out.best.frames.push_back(candidates[r]);
    }
    out.cost = std::move(best_cost);
    out.assignment.assign(epe.cols(), std::nullopt);
    out.assigned_row.assign(epe.cols(), std::nullopt);
    // best_rows ascend, so a strict improvement keeps the earliest row on ties; ties across rows are
    // then resolved by frame id below.
    std::vector<double> best_value(epe.cols(), kInvalidEpe);
    for (std::size_t r : best_rows) {
        const auto row = epe.row(r);
        for (std::size_t p = 0; p < epe.cols(); ++p) {
            const double v = row[p];
            if (is_invalid_epe(v)) {
                continue;
            }
            const auto& pick = out.assigned_row[p];
            if (!pick || v < best_value[p] || (v == best_value[p] && candidates[r] < candidates[*pick])) {
                out.assigned_row[p] = r;
                best_value[p]       = v;
            }
        }
    }
    for (std::size_t p = 0; p < epe.cols(); ++p) {
        if (!occluded.empty() && occluded[p]) {
            out.assigned_row[p] = std::nullopt;
        } else if (out.assigned_row[p]) {
            out.assignment[p] = candidates[*out.assigned_row[p]];
        }
    }
    return out;
}

}  // namespace amfst
