#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "switchlab/classify.hpp"
#include "switchlab/rng.hpp"
#include "switchlab/switch_engine.hpp"

namespace switchlab {

enum class Branch { plus, minus };
enum class Family { pauli, nonunital };

inline const char* to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }
inline const char* to_string(Family f) { return f == Family::pauli ? "pauli" : "nonunital"; }

struct ScanConfig {
    Family family = Family::pauli;
    std::uint64_t sample_count = 0;
    std::uint64_t seed = 0;
    std::string useless_predicate = "entanglement_breaking";
    std::string output_path;
};

// ---------------------------------------------------------------------------
// Samplers. Every sample index owns its own counter-RNG stream, so datasets
// are reproducible and independent of the number of worker threads.
// ---------------------------------------------------------------------------

/// Uniform point of the entanglement-breaking octahedron sum|l_i| <= 1,
/// by rejection from the cube [-1,1]^3 (acceptance 1/6).
inline Vec3 sample_octahedron_point(CounterRng& rng, std::uint64_t* proposals = nullptr) {
    for (;;) {
        Vec3 l(rng.next_symmetric(), rng.next_symmetric(), rng.next_symmetric());
        if (proposals) ++*proposals;
        if (l.cwiseAbs().sum() <= 1.0) return l;
    }
}

inline std::vector<Vec3> sample_pauli_ebc(CounterRng& rng, std::uint64_t count) {
    std::vector<Vec3> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(sample_octahedron_point(rng));
    return out;
}

struct NonUnitalParams {
    double k1 = 0, k3 = 0, t = 0;

    TMatrix tmatrix() const { return TMatrix::non_unital(k1, k3, t); }

    bool is_cp() const {
        return min_eigenvalue4(choi_from_transfer(tmatrix().m())) >= -tol::psd_choi;
    }
    bool is_eb() const { return choi_is_ppt(choi_from_transfer(tmatrix().m())); }
};

/// Rejection sampler over (k1, k3, t) in [-1,1]^3 keeping CP and EB points.
inline NonUnitalParams sample_nonunital_point(CounterRng& rng) {
    for (;;) {
        NonUnitalParams p{rng.next_symmetric(), rng.next_symmetric(), rng.next_symmetric()};
        Mat4 choi = choi_from_transfer(p.tmatrix().m());
        if (min_eigenvalue4(choi) < -tol::psd_choi) continue;
        if (!choi_is_ppt(choi)) continue;
        return p;
    }
}

inline std::vector<NonUnitalParams> sample_nonunital_ebc(CounterRng& rng, std::uint64_t count) {
    std::vector<NonUnitalParams> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(sample_nonunital_point(rng));
    return out;
}

// ---------------------------------------------------------------------------
// Per-channel branch usefulness, closed form for Pauli parameters and
// brute-force Choi/PPT for the non-unital family.
// ---------------------------------------------------------------------------

struct BranchUsefulness {
    bool useful_plus = false;
    bool useful_minus = false;
};

inline BranchUsefulness pauli_branch_usefulness(const Vec3& lambdas) {
    Vec4 p = lambdas_to_probs(lambdas);
    Vec4 wp, wm;
    pauli_branch_weights(p, wp, wm);
    BranchUsefulness out;
    out.useful_plus = !pauli_is_ebc(probs_to_lambdas(Vec4(wp / wp.sum())));
    double qm = wm.sum();
    out.useful_minus = qm >= 1e-12 && !pauli_is_ebc(probs_to_lambdas(Vec4(wm / qm)));
    return out;
}

inline BranchUsefulness cpmap_branch_usefulness(const CPMap& map) {
    BranchMaps b = switch_branches(map);
    BranchUsefulness out;
    out.useful_plus = !b.plus.is_zero() && !choi_is_ppt(b.plus.choi());
    out.useful_minus = !b.minus.is_zero() && !choi_is_ppt(b.minus.choi());
    return out;
}

inline BranchUsefulness nonunital_branch_usefulness(const NonUnitalParams& p) {
    return cpmap_branch_usefulness(CPMap(kraus_from_tmatrix(p.tmatrix())));
}

// ---------------------------------------------------------------------------
// Octahedron branch-mapping dataset.
// ---------------------------------------------------------------------------

struct OctahedronRecord {
    Vec3 lambda_in = Vec3::Zero();
    Vec3 lambda_out = Vec3::Zero();
    bool zero_branch = false;
    bool useful = false;
};

inline OctahedronRecord octahedron_map_one(const Vec3& lambda_in, Branch branch) {
    OctahedronRecord rec;
    rec.lambda_in = lambda_in;
    Vec4 p = lambdas_to_probs(lambda_in);
    Vec4 wp, wm;
    pauli_branch_weights(p, wp, wm);
    const Vec4& w = (branch == Branch::plus) ? wp : wm;
    double total = w.sum();
    if (total < 1e-12) {
        rec.zero_branch = true;
        rec.useful = false;
        return rec;
    }
    rec.lambda_out = probs_to_lambdas(Vec4(w / total));
    rec.useful = !pauli_is_ebc(rec.lambda_out);
    return rec;
}

inline std::vector<OctahedronRecord> octahedron_mapping_dataset(std::uint64_t seed,
                                                                std::uint64_t count,
                                                                Branch branch) {
    std::vector<OctahedronRecord> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        CounterRng rng(seed, i);
        out.push_back(octahedron_map_one(sample_octahedron_point(rng), branch));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Distance statistics.
// ---------------------------------------------------------------------------

struct DistanceStats {
    std::uint64_t count = 0;
    double mean = 0;
    double min = 0;
    double max = 0;
    double bin_width = 0.1;
    std::vector<std::uint64_t> histogram;  // 40 bins covering [0, 4)

    static constexpr int kBins = 40;
};

namespace detail {
struct DistanceAcc {
    std::uint64_t count = 0;
    double sum = 0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    std::array<std::uint64_t, DistanceStats::kBins> bins{};

    void add(double d) {
        ++count;
        sum += d;
        min = std::min(min, d);
        max = std::max(max, d);
        int b = std::min(DistanceStats::kBins - 1, std::max(0, static_cast<int>(d / 0.1)));
        ++bins[b];
    }
    void merge(const DistanceAcc& o) {
        count += o.count;
        sum += o.sum;
        min = std::min(min, o.min);
        max = std::max(max, o.max);
        for (int i = 0; i < DistanceStats::kBins; ++i) bins[i] += o.bins[i];
    }
    DistanceStats finalize() const {
        if (count == 0) throw EmptyInput("no distances recorded");
        DistanceStats s;
        s.count = count;
        s.mean = sum / count;
        s.min = min;
        s.max = max;
        s.histogram.assign(bins.begin(), bins.end());
        return s;
    }
};
}  // namespace detail

inline DistanceStats distance_stats(const std::vector<double>& distances) {
    if (distances.empty()) throw EmptyInput("no distances recorded");
    detail::DistanceAcc acc;
    for (double d : distances) acc.add(d);
    return acc.finalize();
}

// ---------------------------------------------------------------------------
// Concatenation census. A pair enters the census when both members are
// useless under the plus branch or both are useless under the minus branch;
// the composed channel is then tested branch by branch.
// ---------------------------------------------------------------------------

struct ConcatRecord {
    Vec3 params_a = Vec3::Zero();  // lambda triple or (k1, k3, t)
    Vec3 params_b = Vec3::Zero();
    bool gated_plus = false;       // both inputs useless under the plus branch
    bool gated_minus = false;
    bool composed_useful_plus = false;
    bool composed_useful_minus = false;
    double distance = 0;
};

struct VennTallies {
    std::uint64_t gated = 0;
    std::uint64_t plus_only = 0;
    std::uint64_t minus_only = 0;
    std::uint64_t both = 0;
    std::uint64_t neither = 0;
};

struct CensusResult {
    Family family = Family::pauli;
    std::uint64_t seed = 0;
    std::uint64_t pairs = 0;
    VennTallies venn;
    std::optional<DistanceStats> dist_plus;   // empty when no pair qualified
    std::optional<DistanceStats> dist_minus;
    std::vector<ConcatRecord> records;        // only kept up to record_limit
};

namespace detail {

inline ConcatRecord census_pair_pauli(CounterRng& rng) {
    ConcatRecord rec;
    rec.params_a = sample_octahedron_point(rng);
    rec.params_b = sample_octahedron_point(rng);
    BranchUsefulness ua = pauli_branch_usefulness(rec.params_a);
    BranchUsefulness ub = pauli_branch_usefulness(rec.params_b);
    rec.gated_plus = !ua.useful_plus && !ub.useful_plus;
    rec.gated_minus = !ua.useful_minus && !ub.useful_minus;
    if (!rec.gated_plus && !rec.gated_minus) return rec;
    Vec3 composed = rec.params_a.cwiseProduct(rec.params_b);
    BranchUsefulness uc = pauli_branch_usefulness(composed);
    rec.composed_useful_plus = uc.useful_plus;
    rec.composed_useful_minus = uc.useful_minus;
    rec.distance = (rec.params_a - rec.params_b).norm();
    return rec;
}

inline ConcatRecord census_pair_nonunital(CounterRng& rng) {
    ConcatRecord rec;
    NonUnitalParams a = sample_nonunital_point(rng);
    NonUnitalParams b = sample_nonunital_point(rng);
    rec.params_a = Vec3(a.k1, a.k3, a.t);
    rec.params_b = Vec3(b.k1, b.k3, b.t);
    BranchUsefulness ua = nonunital_branch_usefulness(a);
    BranchUsefulness ub = nonunital_branch_usefulness(b);
    rec.gated_plus = !ua.useful_plus && !ub.useful_plus;
    rec.gated_minus = !ua.useful_minus && !ub.useful_minus;
    if (!rec.gated_plus && !rec.gated_minus) return rec;
    // compose(a, b) = a o b in the affine picture
    RMat4 composed = a.tmatrix().m() * b.tmatrix().m();
    BranchUsefulness uc = cpmap_branch_usefulness(CPMap(kraus_from_choi(choi_from_transfer(composed))));
    rec.composed_useful_plus = uc.useful_plus;
    rec.composed_useful_minus = uc.useful_minus;
    rec.distance = (rec.params_a - rec.params_b).norm();
    return rec;
}

struct CensusAcc {
    VennTallies venn;
    DistanceAcc plus;
    DistanceAcc minus;
    std::vector<ConcatRecord> records;

    void add(const ConcatRecord& rec, std::uint64_t record_limit) {
        if (!rec.gated_plus && !rec.gated_minus) return;
        ++venn.gated;
        if (rec.composed_useful_plus && rec.composed_useful_minus)
            ++venn.both;
        else if (rec.composed_useful_plus)
            ++venn.plus_only;
        else if (rec.composed_useful_minus)
            ++venn.minus_only;
        else
            ++venn.neither;
        if (rec.gated_plus && rec.composed_useful_plus) plus.add(rec.distance);
        if (rec.gated_minus && rec.composed_useful_minus) minus.add(rec.distance);
        if (records.size() < record_limit &&
            (rec.composed_useful_plus || rec.composed_useful_minus))
            records.push_back(rec);
    }
    void merge(CensusAcc&& o) {
        venn.gated += o.venn.gated;
        venn.plus_only += o.venn.plus_only;
        venn.minus_only += o.venn.minus_only;
        venn.both += o.venn.both;
        venn.neither += o.venn.neither;
        plus.merge(o.plus);
        minus.merge(o.minus);
        records.insert(records.end(), std::make_move_iterator(o.records.begin()),
                       std::make_move_iterator(o.records.end()));
    }
};

template <typename PerIndex, typename Acc>
void parallel_indexed(std::uint64_t count, int threads, PerIndex&& per_index, Acc& acc,
                      std::vector<Acc>& partials) {
    threads = std::max(1, threads);
    if (threads == 1) {
        for (std::uint64_t i = 0; i < count; ++i) per_index(i, acc);
        return;
    }
    partials.resize(threads);
    std::vector<std::thread> pool;
    std::uint64_t chunk = (count + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        std::uint64_t lo = w * chunk;
        std::uint64_t hi = std::min<std::uint64_t>(count, lo + chunk);
        pool.emplace_back([&, w, lo, hi] {
            for (std::uint64_t i = lo; i < hi; ++i) per_index(i, partials[w]);
        });
    }
    for (auto& th : pool) th.join();
    for (auto& p : partials) acc.merge(std::move(p));
}

}  // namespace detail

inline CensusResult concat_census(std::uint64_t seed, std::uint64_t pairs, Family family,
                                  int threads = 1, std::uint64_t record_limit = 0) {
    CensusResult result;
    result.family = family;
    result.seed = seed;
    result.pairs = pairs;

    detail::CensusAcc acc;
    std::vector<detail::CensusAcc> partials;
    // record_limit is applied per worker, then truncated after the merge, so
    // the kept prefix is deterministic for a fixed thread layout of indices.
    auto per_index = [&](std::uint64_t i, detail::CensusAcc& a) {
        CounterRng rng(seed, i);
        ConcatRecord rec = (family == Family::pauli) ? detail::census_pair_pauli(rng)
                                                     : detail::census_pair_nonunital(rng);
        a.add(rec, record_limit);
    };
    detail::parallel_indexed(pairs, threads, per_index, acc, partials);

    result.venn = acc.venn;
    if (acc.plus.count > 0) result.dist_plus = acc.plus.finalize();
    if (acc.minus.count > 0) result.dist_minus = acc.minus.finalize();
    result.records = std::move(acc.records);
    if (result.records.size() > record_limit) result.records.resize(record_limit);
    return result;
}

// ---------------------------------------------------------------------------
// Search for a counterexample to "composing two completely useless channels
// stays completely useless" (Pauli family).
// ---------------------------------------------------------------------------

struct ConjectureResult {
    std::uint64_t pairs_checked = 0;
    std::optional<ConcatRecord> counterexample;
};

inline bool pauli_completely_useless(const Vec3& lambdas) {
    if (!pauli_is_ebc(lambdas)) return false;
    BranchUsefulness u = pauli_branch_usefulness(lambdas);
    return !u.useful_plus && !u.useful_minus;
}

inline Vec3 sample_completely_useless(CounterRng& rng) {
    for (;;) {
        Vec3 l = sample_octahedron_point(rng);
        if (pauli_completely_useless(l)) return l;
    }
}

inline ConjectureResult conjecture_search(std::uint64_t seed, std::uint64_t pairs,
                                          int threads = 1) {
    struct Acc {
        std::uint64_t checked = 0;
        std::optional<ConcatRecord> found;
        void merge(Acc&& o) {
            checked += o.checked;
            if (!found && o.found) found = o.found;
        }
    };
    Acc acc;
    std::vector<Acc> partials;
    auto per_index = [&](std::uint64_t i, Acc& a) {
        CounterRng rng(seed, i);
        Vec3 la = sample_completely_useless(rng);
        Vec3 lb = sample_completely_useless(rng);
        ++a.checked;
        Vec3 composed = la.cwiseProduct(lb);
        if (!pauli_completely_useless(composed)) {
            ConcatRecord rec;
            rec.params_a = la;
            rec.params_b = lb;
            BranchUsefulness u = pauli_branch_usefulness(composed);
            rec.composed_useful_plus = u.useful_plus;
            rec.composed_useful_minus = u.useful_minus;
            rec.distance = (la - lb).norm();
            if (!a.found) a.found = rec;
        }
    };
    detail::parallel_indexed(pairs, threads, per_index, acc, partials);
    return {acc.checked, acc.found};
}

}  // namespace switchlab
