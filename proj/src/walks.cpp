#include "dilute/walks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "dilute/errors.hpp"
#include "dilute/rational.hpp"
#include "dilute/series.hpp"

namespace dilute::walks {

namespace {

Rat rpow(const Rat& base, unsigned long e) {
    Rat r = 1;
    Rat b = base;
    while (e != 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

LoopType classify(const std::vector<unsigned>& multiplicities) {
    unsigned quad = 0;
    unsigned sext = 0;
    for (unsigned m : multiplicities) {
        if (m == 2) continue;
        if (m == 4) ++quad;
        else if (m == 6) ++sext;
        else return LoopType::higher;
    }
    if (quad == 0 && sext == 0) return LoopType::zero;
    if (quad == 1 && sext == 0) return LoopType::one;
    if (quad == 0 && sext == 1) return LoopType::two;
    if (quad == 2 && sext == 0) return LoopType::one_one;
    return LoopType::higher;
}

// Depth-first generator. Vertex ids are creation order, which coincides with
// first-visit order, so each unordered rooted tree walk appears once.
class Enumerator {
public:
    Enumerator(unsigned k, const std::function<void(const WalkHistory&)>& visit)
        : k_(k), visit_(visit) {
        moves_.reserve(2 * k);
        mult_.push_back(0); // root slot, the root has no parent edge
        lv_.push_back(0);
        children_.emplace_back();
        parent_.push_back(0);
    }

    void run() { step(2 * k_); }

private:
    void step(unsigned remaining) {
        if (remaining == depth_) {
            if (depth_ == 0) {
                emit();
            } else {
                move_up(remaining);
            }
            return;
        }
        // remaining - depth_ is even, so there is room to both descend and
        // come back; every move kind stays feasible.
        if (depth_ > 0) move_up(remaining);
        for (unsigned i = 0; i < lv_[cur_]; ++i) move_down(i, remaining);
        move_fresh(remaining);
    }

    void move_up(unsigned remaining) {
        const unsigned v = cur_;
        moves_.push_back(-1);
        ++mult_[v];
        cur_ = parent_[v];
        --depth_;
        step(remaining - 1);
        ++depth_;
        cur_ = v;
        --mult_[v];
        moves_.pop_back();
    }

    void move_down(unsigned slot, unsigned remaining) {
        const unsigned child = children_[cur_][slot];
        const unsigned prev = cur_;
        moves_.push_back(static_cast<int>(slot));
        ++mult_[child];
        cur_ = child;
        ++depth_;
        step(remaining - 1);
        --depth_;
        cur_ = prev;
        --mult_[child];
        moves_.pop_back();
    }

    void move_fresh(unsigned remaining) {
        const unsigned child = static_cast<unsigned>(lv_.size());
        const unsigned prev = cur_;
        moves_.push_back(-2);
        children_[cur_].push_back(child);
        ++lv_[cur_];
        mult_.push_back(1);
        lv_.push_back(0);
        children_.emplace_back();
        parent_.push_back(prev);
        cur_ = child;
        ++depth_;
        step(remaining - 1);
        --depth_;
        cur_ = prev;
        parent_.pop_back();
        children_.pop_back();
        lv_.pop_back();
        mult_.pop_back();
        --lv_[prev];
        children_[prev].pop_back();
        moves_.pop_back();
    }

    void emit() {
        WalkHistory h;
        h.k = k_;
        h.moves = moves_;
        h.multiplicities.assign(mult_.begin() + 1, mult_.end());
        h.child_counts = lv_;
        h.alpha = static_cast<unsigned>(mult_.size() - 1);
        h.loop_type = classify(h.multiplicities);
        visit_(h);
    }

    unsigned k_;
    const std::function<void(const WalkHistory&)>& visit_;
    std::vector<int> moves_;
    std::vector<unsigned> mult_;
    std::vector<unsigned> lv_;
    std::vector<std::vector<unsigned>> children_;
    std::vector<unsigned> parent_;
    unsigned cur_ = 0;
    unsigned depth_ = 0;
};

// Histories sharing (loop type, alpha, root child count, subtree child-count
// histogram) get identical weights under every model, so only group counts
// are kept. Histogram entries with l = 0 are dropped: FM_0 is 1.
struct GroupKey {
    std::uint8_t type = 0;
    unsigned alpha = 0;
    unsigned l_root = 0;
    std::vector<std::pair<unsigned, unsigned>> subtree_hist;
    auto operator<=>(const GroupKey&) const = default;
};

struct Tally {
    unsigned k = 0;
    std::map<GroupKey, unsigned long long> groups;
    std::vector<unsigned long long> by_alpha;
};

const Tally& tally(unsigned k, unsigned k_max) {
    if (k > k_max) {
        throw resource_error("walk enumeration is exponential in k; k = " + std::to_string(k) +
                             " exceeds the cap " + std::to_string(k_max));
    }
    static std::mutex mu;
    static std::map<unsigned, Tally> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;

    Tally t;
    t.k = k;
    t.by_alpha.assign(k + 1, 0);
    if (k == 0) {
        // the empty walk: a 0-loop that uses no edges
        t.groups[GroupKey{static_cast<std::uint8_t>(LoopType::zero), 0, 0, {}}] = 1;
        t.by_alpha[0] = 1;
    } else {
        enumerate_histories(
            k,
            [&](const WalkHistory& h) {
                GroupKey key;
                key.type = static_cast<std::uint8_t>(h.loop_type);
                key.alpha = h.alpha;
                key.l_root = h.child_counts[0];
                std::map<unsigned, unsigned> hist;
                for (std::size_t v = 1; v < h.child_counts.size(); ++v) {
                    if (h.child_counts[v] > 0) ++hist[h.child_counts[v]];
                }
                key.subtree_hist.assign(hist.begin(), hist.end());
                ++t.groups[key];
                ++t.by_alpha[h.alpha];
            },
            k_max);
    }
    return cache.emplace(k, std::move(t)).first->second;
}

void require_exact(const FactorialMomentModel& model) {
    if (!model.exact()) {
        throw unsupported_error("factorial moment model '" + model.name +
                                "' carries asymptotic data only; exact evaluation needs "
                                "explicit factorial moments");
    }
}

void require_positive_c(const Rat& c) {
    if (!(c > 0)) throw dilute::domain_error("mean degree c must be positive");
}

constexpr std::size_t type_count = 5;

// prof[type][l_root] = sum over matching groups of count * prod FM_{l_v}(q),
// the part of a history's weight that does not involve the root law.
std::array<std::vector<Rat>, type_count> root_profiles(unsigned k,
                                                       const FactorialMomentModel& model,
                                                       const Rat& c, unsigned k_max) {
    const Tally& t = tally(k, k_max);
    std::array<std::vector<Rat>, type_count> prof;
    std::map<unsigned, Rat> fmq;
    auto fm_q = [&](unsigned l) -> const Rat& {
        auto it = fmq.find(l);
        if (it == fmq.end()) it = fmq.emplace(l, model.fm_q(l, c)).first;
        return it->second;
    };
    for (const auto& [key, count] : t.groups) {
        Rat w = rat(static_cast<long>(count));
        for (auto [l, cnt] : key.subtree_hist) w *= rpow(fm_q(l), cnt);
        auto& vec = prof[key.type];
        if (vec.size() <= key.l_root) vec.resize(key.l_root + 1, Rat(0));
        vec[key.l_root] += w;
    }
    return prof;
}

Rat root_law_fm(const FactorialMomentModel& model, RootLaw law, unsigned l, const Rat& c) {
    return law == RootLaw::ugw_p ? model.fm_p(l, c) : model.fm_q(l, c);
}

// Bottom-up evaluator for the loop-count recursions. All intermediate
// quantities are q-law objects; only identifiers 6 and 8 weigh the root by p.
class RecursionEngine {
public:
    RecursionEngine(const FactorialMomentModel& model, const Rat& c, ChildLawReading reading)
        : model_(model), c_(c), reading_(reading) {
        require_positive_c(c_);
        require_exact(model_);
        lam0_.push_back(Rat(1));
        a2_.push_back(Rat(1));
        a3_.push_back(Rat(1));
        lam1_.push_back(Rat(0));
        lam2_.push_back(Rat(0));
        pl1_.push_back(Rat(0));
        lam11_.push_back(Rat(0));
    }

    Rat eval(int eq, unsigned k) {
        ensure(k);
        switch (eq) {
            case 6: return zero_loop_root_sum(k, /*p_weights=*/true);
            case 7: return lam0_[k];
            case 8: return one_loop_root_sum(k, /*p_weights=*/true);
            case 9: return a2_[k];
            case 10: return lam1_[k];
            case 13: return lam2_[k];
            case 14: return lam11_[k];
            case 15: return pl1_[k];
            default:
                throw usage_error("recursion identifier must be one of 6, 7, 8, 9, 10, 13, 14, 15");
        }
    }

    Recursion14Terms terms14(unsigned k) {
        ensure(k);
        return terms14_at(k);
    }

private:
    // (lam0^{*m})[s], the m-fold convolution power
    Rat conv(unsigned m, int s) {
        if (s < 0) return Rat(0);
        if (m == 0) return s == 0 ? Rat(1) : Rat(0);
        const auto key = std::pair<unsigned, unsigned>(m, static_cast<unsigned>(s));
        auto it = conv_.find(key);
        if (it != conv_.end()) return it->second;
        Rat sum = 0;
        for (int j = 0; j <= s; ++j) sum += lam0_[static_cast<unsigned>(j)] * conv(m - 1, s - j);
        conv_.emplace(key, sum);
        return sum;
    }

    const Rat& weight(std::map<unsigned, Rat>& memo, unsigned l, bool p_law) {
        auto it = memo.find(l);
        if (it == memo.end()) {
            Rat v = (p_law ? model_.fm_p(l, c_) : model_.fm_q(l, c_)) / rpow(c_, l);
            it = memo.emplace(l, std::move(v)).first;
        }
        return it->second;
    }

    const Rat& w_q(unsigned l) { return weight(wq_, l, false); }
    const Rat& w_p(unsigned l) { return weight(wp_, l, true); }
    const Rat& w_r(unsigned l) {
        return reading_ == ChildLawReading::p_law ? w_p(l) : w_q(l);
    }

    Rat zero_loop_root_sum(unsigned k, bool p_weights) {
        if (k == 0) return Rat(1);
        Rat sum = 0;
        for (unsigned l = 1; l <= k; ++l) {
            sum += (p_weights ? w_p(l) : w_q(l)) * conv(l, static_cast<int>(k - l));
        }
        return sum;
    }

    // shared shape of the 1-loop recursions: a 1-loop deeper in one subtree,
    // or the quadruple edge at the root over a 0-loop pair
    Rat one_loop_root_sum(unsigned k, bool p_weights) {
        if (k < 2) return Rat(0);
        Rat t1 = 0;
        Rat t2 = 0;
        for (unsigned l = 1; l <= k; ++l) {
            const Rat& w = p_weights ? w_p(l) : w_q(l);
            Rat inner1 = 0;
            for (unsigned kp = 2; kp + l <= k; ++kp) {
                inner1 += lam1_[kp] * conv(l - 1, static_cast<int>(k - kp - l));
            }
            t1 += w * rat(static_cast<long>(l)) * inner1;
            Rat inner2 = 0;
            for (unsigned kp = 0; kp + l + 1 <= k; ++kp) {
                inner2 += a2_[kp] * conv(l - 1, static_cast<int>(k - kp - l - 1));
            }
            t2 += w / c_ * rat(static_cast<long>(l) * (l + 1), 2) * inner2;
        }
        return t1 + t2;
    }

    Rat compute_lam2(unsigned k) {
        if (k < 3) return Rat(0);
        Rat t1 = 0;
        Rat t2 = 0;
        for (unsigned l = 1; l <= k; ++l) {
            Rat inner1 = 0;
            for (unsigned kp = 3; kp + l <= k; ++kp) {
                inner1 += lam2_[kp] * conv(l - 1, static_cast<int>(k - kp - l));
            }
            t1 += w_r(l) * rat(static_cast<long>(l)) * inner1;
            Rat inner2 = 0;
            for (unsigned kp = 0; kp + l + 2 <= k; ++kp) {
                inner2 += a3_[kp] * conv(l - 1, static_cast<int>(k - kp - l - 2));
            }
            t2 += w_r(l) / (c_ * c_) * rat_binom(static_cast<long>(l) + 2, 3) * inner2;
        }
        return t1 + t2;
    }

    Rat compute_pl1(unsigned k) {
        if (k < 2) return Rat(0);
        Rat t1 = 0;
        Rat t2 = 0;
        for (unsigned l1 = 1; l1 <= k; ++l1) {
            for (unsigned l2 = 0; l1 + l2 <= k; ++l2) {
                const unsigned L = l1 + l2;
                Rat inner1 = 0;
                for (unsigned kp = 2; kp + L <= k; ++kp) {
                    inner1 += lam1_[kp] * conv(L - 1, static_cast<int>(k - L - kp));
                }
                t1 += w_r(L) * rat(static_cast<long>(l1)) * inner1;
                Rat inner2 = 0;
                for (unsigned kp = 0; kp + L + 1 <= k; ++kp) {
                    inner2 += a2_[kp] * conv(L - 1, static_cast<int>(k - L - kp - 1));
                }
                t2 += w_r(L) / c_ * rat_binom(static_cast<long>(l1) + 1, 2) * inner2;
            }
        }
        return rat(2) * (t1 + t2);
    }

    Recursion14Terms terms14_at(unsigned k) {
        Recursion14Terms out{Rat(0), Rat(0), Rat(0), Rat(0), Rat(0)};
        if (k < 4) return out;
        for (unsigned l = 1; l <= k; ++l) {
            const Rat& w = w_r(l);

            Rat inner1 = 0;
            for (unsigned kp = 4; kp + l <= k; ++kp) {
                inner1 += lam11_[kp] * conv(l - 1, static_cast<int>(k - kp - l));
            }
            out.t1 += w * rat(static_cast<long>(l)) * inner1;

            if (l >= 2) {
                Rat inner2 = 0;
                for (unsigned kp = 2; kp + l <= k; ++kp) {
                    for (unsigned kpp = 2; kp + kpp + l <= k; ++kpp) {
                        inner2 += lam1_[kp] * lam1_[kpp] *
                                  conv(l - 2, static_cast<int>(k - kp - kpp - l));
                    }
                }
                out.t2 += w * rat_binom(static_cast<long>(l), 2) * inner2;
            }

            Rat inner3 = 0;
            for (unsigned kp = 2; kp + l + 1 <= k; ++kp) {
                inner3 += pl1_[kp] * conv(l - 1, static_cast<int>(k - kp - l - 1));
            }
            out.t3 += w / c_ * rat_binom(static_cast<long>(l) + 1, 2) * inner3;

            if (l >= 2) {
                Rat inner4 = 0;
                for (unsigned kp = 0; kp + l + 3 <= k; ++kp) {
                    for (unsigned kpp = 2; kp + kpp + l + 1 <= k; ++kpp) {
                        inner4 += a2_[kp] * lam1_[kpp] *
                                  conv(l - 2, static_cast<int>(k - kp - kpp - l - 1));
                    }
                }
                out.t4 += w / c_ * rat_binom(static_cast<long>(l) + 1, 2) *
                          rat(static_cast<long>(l) - 1) * inner4;

                Rat inner5 = 0;
                for (unsigned kp = 0; kp + l + 2 <= k; ++kp) {
                    for (unsigned kpp = 0; kp + kpp + l + 2 <= k; ++kpp) {
                        inner5 += a2_[kp] * a2_[kpp] *
                                  conv(l - 2, static_cast<int>(k - kp - kpp - l - 2));
                    }
                }
                out.t5 += w / (c_ * c_) * rat_binom(static_cast<long>(l) + 2, 4) * rat(6) * inner5;
            }
        }
        return out;
    }

    void ensure(unsigned k) {
        for (unsigned j = static_cast<unsigned>(lam0_.size()); j <= k; ++j) {
            lam0_.push_back(zero_loop_root_sum(j, /*p_weights=*/false));
        }
        for (unsigned j = static_cast<unsigned>(a2_.size()); j <= k; ++j) {
            Rat s2 = 0;
            Rat s3 = 0;
            for (unsigned s = 1; s <= j; ++s) {
                Rat base = w_q(s) * conv(s, static_cast<int>(j - s));
                s2 += rat(static_cast<long>(s) + 1) * base;
                s3 += rat_binom(static_cast<long>(s) + 2, 2) * base;
            }
            a2_.push_back(s2);
            a3_.push_back(s3);
        }
        for (unsigned j = static_cast<unsigned>(lam1_.size()); j <= k; ++j) {
            lam1_.push_back(one_loop_root_sum(j, /*p_weights=*/false));
        }
        for (unsigned j = static_cast<unsigned>(lam2_.size()); j <= k; ++j) {
            lam2_.push_back(compute_lam2(j));
        }
        for (unsigned j = static_cast<unsigned>(pl1_.size()); j <= k; ++j) {
            pl1_.push_back(compute_pl1(j));
        }
        for (unsigned j = static_cast<unsigned>(lam11_.size()); j <= k; ++j) {
            lam11_.push_back(terms14_at(j).total());
        }
    }

    const FactorialMomentModel& model_;
    Rat c_;
    ChildLawReading reading_;
    std::vector<Rat> lam0_, lam1_, lam2_, lam11_, a2_, a3_, pl1_;
    std::map<std::pair<unsigned, unsigned>, Rat> conv_;
    std::map<unsigned, Rat> wq_, wp_;
};

} // namespace

void enumerate_histories(unsigned k, const std::function<void(const WalkHistory&)>& visit,
                         unsigned k_max) {
    if (k == 0) throw usage_error("walk enumeration needs k >= 1");
    if (k > k_max) {
        throw resource_error("walk enumeration is exponential in k; k = " + std::to_string(k) +
                             " exceeds the cap " + std::to_string(k_max));
    }
    Enumerator(k, visit).run();
}

MomentPolynomial moment_polynomial(unsigned k, unsigned k_max) {
    if (k == 0) throw usage_error("moment polynomial needs k >= 1");
    const Tally& t = tally(k, k_max);
    MomentPolynomial poly;
    poly.k = k;
    poly.counts.resize(k);
    for (unsigned e = 0; e < k; ++e) poly.counts[e] = t.by_alpha[k - e];
    return poly;
}

Rat eval(const MomentPolynomial& poly, const Rat& c) {
    require_positive_c(c);
    Rat sum = 0;
    for (unsigned e = 0; e < poly.counts.size(); ++e) {
        sum += rat(static_cast<long>(poly.counts[e])) / rpow(c, e);
    }
    return sum;
}

std::vector<Rat> d_oracle_values(std::size_t order, unsigned k_max) {
    if (order > static_cast<std::size_t>(k_max) + 1) {
        throw resource_error("second-order oracle coefficients need walk enumeration up to k = " +
                             std::to_string(order - 1) + ", beyond the cap " +
                             std::to_string(k_max));
    }
    std::vector<Rat> values(order, Rat(0));
    for (std::size_t k = 3; k < order; ++k) {
        values[k] = rat(static_cast<long>(tally(static_cast<unsigned>(k), k_max).by_alpha[k - 2]));
    }
    return values;
}

Rat exact_moment(unsigned k, const FactorialMomentModel& model, const Rat& c, unsigned k_max) {
    require_exact(model);
    require_positive_c(c);
    if (k == 0) return Rat(1);
    auto prof = root_profiles(k, model, c, k_max);
    Rat sum = 0;
    for (const auto& vec : prof) {
        for (unsigned l = 0; l < vec.size(); ++l) {
            if (vec[l] != 0) sum += vec[l] * model.fm_p(l, c);
        }
    }
    return sum / rpow(c, k);
}

Rat loop_expectation(unsigned k, LoopType type, RootLaw law, const FactorialMomentModel& model,
                     const Rat& c, unsigned k_max) {
    require_exact(model);
    require_positive_c(c);
    auto prof = root_profiles(k, model, c, k_max);
    const auto& vec = prof[static_cast<std::size_t>(type)];
    Rat sum = 0;
    for (unsigned l = 0; l < vec.size(); ++l) {
        if (vec[l] != 0) sum += vec[l] * root_law_fm(model, law, l, c);
    }
    return sum / rpow(c, k);
}

Rat pair_expectation(unsigned k, LoopType t1, LoopType t2, RootLaw law,
                     const FactorialMomentModel& model, const Rat& c, unsigned k_max) {
    require_exact(model);
    require_positive_c(c);
    std::vector<std::array<std::vector<Rat>, type_count>> prof;
    prof.reserve(k + 1);
    for (unsigned j = 0; j <= k; ++j) prof.push_back(root_profiles(j, model, c, k_max));

    std::map<unsigned, Rat> fm_root;
    auto root_fm = [&](unsigned l) -> const Rat& {
        auto it = fm_root.find(l);
        if (it == fm_root.end()) it = fm_root.emplace(l, root_law_fm(model, law, l, c)).first;
        return it->second;
    };

    Rat sum = 0;
    for (unsigned k1 = 0; k1 <= k; ++k1) {
        const auto& p1 = prof[k1][static_cast<std::size_t>(t1)];
        const auto& p2 = prof[k - k1][static_cast<std::size_t>(t2)];
        for (unsigned l1 = 0; l1 < p1.size(); ++l1) {
            if (p1[l1] == 0) continue;
            for (unsigned l2 = 0; l2 < p2.size(); ++l2) {
                if (p2[l2] == 0) continue;
                sum += p1[l1] * p2[l2] * root_fm(l1 + l2);
            }
        }
    }
    return sum / rpow(c, k);
}

Rat triple_zero_expectation(unsigned k, RootLaw law, const FactorialMomentModel& model,
                            const Rat& c, unsigned k_max) {
    require_exact(model);
    require_positive_c(c);
    std::vector<std::vector<Rat>> zero_prof;
    zero_prof.reserve(k + 1);
    for (unsigned j = 0; j <= k; ++j) {
        zero_prof.push_back(root_profiles(j, model, c, k_max)[static_cast<std::size_t>(LoopType::zero)]);
    }

    std::map<unsigned, Rat> fm_root;
    auto root_fm = [&](unsigned l) -> const Rat& {
        auto it = fm_root.find(l);
        if (it == fm_root.end()) it = fm_root.emplace(l, root_law_fm(model, law, l, c)).first;
        return it->second;
    };

    Rat sum = 0;
    for (unsigned k1 = 0; k1 <= k; ++k1) {
        for (unsigned k2 = 0; k1 + k2 <= k; ++k2) {
            const auto& p1 = zero_prof[k1];
            const auto& p2 = zero_prof[k2];
            const auto& p3 = zero_prof[k - k1 - k2];
            for (unsigned l1 = 0; l1 < p1.size(); ++l1) {
                if (p1[l1] == 0) continue;
                for (unsigned l2 = 0; l2 < p2.size(); ++l2) {
                    if (p2[l2] == 0) continue;
                    for (unsigned l3 = 0; l3 < p3.size(); ++l3) {
                        if (p3[l3] == 0) continue;
                        sum += p1[l1] * p2[l2] * p3[l3] * root_fm(l1 + l2 + l3);
                    }
                }
            }
        }
    }
    return sum / rpow(c, k);
}

Rat recursion_eval(int eq, unsigned k, const FactorialMomentModel& model, const Rat& c,
                   ChildLawReading reading, unsigned k_max) {
    if (k > k_max) {
        throw resource_error("recursion evaluation capped at k = " + std::to_string(k_max) +
                             " to mirror the enumeration bound");
    }
    return RecursionEngine(model, c, reading).eval(eq, k);
}

Recursion14Terms recursion14_terms(unsigned k, const FactorialMomentModel& model, const Rat& c,
                                   ChildLawReading reading) {
    return RecursionEngine(model, c, reading).terms14(k);
}

double ExpansionCheck::spread() const {
    double hi = std::max(std::abs(scaled_min), std::abs(scaled_max));
    if (hi == 0.0) return 0.0;
    return (scaled_max - scaled_min) / hi;
}

ExpansionCheck expansion_check(unsigned k, const FactorialMomentModel& model,
                               const std::vector<Rat>& c_values, unsigned k_max) {
    require_exact(model);
    if (c_values.empty()) throw usage_error("expansion check needs at least one value of c");

    const qs::Series cat = qs::catalan_T(k + 1);
    const qs::Series s1 = expansion::named_series("S1", k + 1);
    const Rat cat_k = cat[k];
    Rat first_order = s1[k];

    unsigned long alpha_power = 0;
    Rat alpha_coeff = 0;
    if (model.conc_exponent) {
        const Rat& a = *model.conc_exponent;
        if (a.get_den() != 1 || a <= 0 || !a.get_num().fits_ulong_p()) {
            throw unsupported_error("expansion check needs a positive integer concentration "
                                    "exponent; got " + rat_str(a));
        }
        alpha_power = a.get_num().get_ui();
        if (!model.f_alpha) {
            throw unsupported_error("model declares a concentration exponent without the matching "
                                    "correction series");
        }
        alpha_coeff = expansion::sigma_f_moments(model.f_alpha(k + 1), k + 1)[k];
    }
    if (model.f_extra_c1) {
        first_order += expansion::sigma_f_moments(model.f_extra_c1(k + 1), k + 1)[k];
    }

    ExpansionCheck out;
    out.k = k;
    bool first = true;
    for (const Rat& c : c_values) {
        require_positive_c(c);
        ExpansionCheckRow row;
        row.c = c;
        row.exact = exact_moment(k, model, c, k_max);
        row.predicted = cat_k + first_order / c;
        if (alpha_power != 0) row.predicted += alpha_coeff / rpow(c, alpha_power);
        row.residual = row.exact - row.predicted;
        row.residual_times_c2 = rat_double(row.residual * c * c);
        if (first || row.residual_times_c2 < out.scaled_min) out.scaled_min = row.residual_times_c2;
        if (first || row.residual_times_c2 > out.scaled_max) out.scaled_max = row.residual_times_c2;
        first = false;
        out.rows.push_back(std::move(row));
    }
    return out;
}

} // namespace dilute::walks
