#include "torsor/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace torsor {

namespace {

struct Mono {
    std::vector<std::pair<std::size_t, unsigned>> terms;
    u128 rhs = 1;  // B^den
};

struct SignGroup {
    std::vector<int> term_sign;
    std::vector<int> thin_sign;
    u64 mult = 0;
};

// Coprimality requirement for the free variables coming from one gcd set.
struct FreeGcd {
    int members = 0;  // bit 0: first free var, bit 1: second
    std::vector<std::size_t> others;
};

struct FreeMono {
    std::size_t mono;
    unsigned a = 0, b = 0;
};

u64 mobius_count(u64 v, const u64* primes, unsigned n) {
    // #{1 <= f <= v : gcd(f, prod primes) = 1}
    if (v == 0) return 0;
    i64 total = 0;
    struct Frame {
        unsigned next;
        u64 d;
        int sign;
    };
    Frame stack[512];
    unsigned sp = 0;
    stack[sp++] = {0, 1, 1};
    while (sp) {
        const Frame f = stack[--sp];
        total += f.sign * static_cast<i64>(v / f.d);
        for (unsigned i = f.next; i < n; ++i) {
            const u64 nd = f.d * primes[i];
            if (nd > v) continue;
            stack[sp++] = {i + 1, nd, -f.sign};
        }
    }
    return static_cast<u64>(total);
}

void add_prime(u64* list, unsigned& n, u64 p) {
    for (unsigned i = 0; i < n; ++i) {
        if (list[i] == p) return;
    }
    list[n++] = p;
}

class Engine {
public:
    Engine(const VarietySpec& spec, u64 bound, bool apply_thin);

    [[nodiscard]] u64 count_slice(unsigned slice) const;

private:
    struct State {
        std::vector<u64> val;
        std::vector<u128> loop_prod;  // per monomial, product over looped variables
        std::vector<u64> divs;
    };

    u64 level_bound(std::size_t level, const State& st) const;
    void descend(std::size_t level, State& st, u64& total) const;
    void innermost(State& st, u64& total) const;
    u64 pairs_for(u64 mabs, u64 lo, u64 hi, State& st) const;
    u64 free_count(State& st) const;

    const VarietySpec& spec_;
    u64 bound_;
    bool apply_thin_;
    std::size_t p1_ = 0, p2_ = 0;
    std::vector<std::size_t> loop_;
    std::vector<int> level_of_;
    std::vector<std::size_t> free_;
    std::vector<Mono> monos_;
    std::vector<std::vector<std::pair<std::size_t, unsigned>>> level_monos_;  // (mono, exponent)
    std::vector<std::vector<std::size_t>> level_gcd_;                         // looped-only gcd sets checked at level
    std::vector<std::vector<std::pair<std::size_t, int>>> terms_;             // per non-P block: (var, h)
    std::vector<int> term_block_sign_;
    std::vector<std::pair<std::size_t, unsigned>> p1_monos_, p2_monos_;
    bool p_bounds_inner_ = false;
    std::vector<std::size_t> exact_monos_;
    struct PGcd {
        std::vector<std::size_t> loop_members;
        bool has1 = false, has2 = false;
    };
    std::vector<PGcd> p_gcd_;
    std::vector<FreeMono> free_monos_;
    std::vector<FreeGcd> free_gcd_;
    std::vector<SignGroup> groups_;
    std::unique_ptr<SpfSieve> sieve_;
};

Engine::Engine(const VarietySpec& spec, u64 bound, bool apply_thin)
    : spec_(spec), bound_(bound), apply_thin_(apply_thin) {
    const int k = spec.blocks();
    int pblock = -1;
    for (int b = 1; b <= k && pblock < 0; ++b) {
        const auto mem = spec.block_members(b);
        if (mem.size() == 2 && spec.variables[mem[0]].h == 1 && spec.variables[mem[1]].h == 1) {
            pblock = b;
            p1_ = mem[0];
            p2_ = mem[1];
        }
    }
    if (pblock < 0) throw std::invalid_argument("count_exact: equation has no bilinear block");
    free_ = spec.block_members(0);
    if (free_.size() > 2) throw std::invalid_argument("count_exact: more than two free variables");

    std::vector<int> order;
    for (int b = 1; b <= k; ++b) {
        if (b != pblock) order.push_back(b);
    }
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return spec.block_members(x).size() > spec.block_members(y).size();
    });
    level_of_.assign(spec.size(), -1);
    for (int b : order) {
        std::vector<std::pair<std::size_t, int>> term;
        for (auto v : spec.block_members(b)) {
            level_of_[v] = static_cast<int>(loop_.size());
            loop_.push_back(v);
            term.emplace_back(v, spec.variables[v].h);
        }
        terms_.push_back(std::move(term));
        term_block_sign_.push_back(spec.signs[b - 1]);
    }
    if (loop_.empty()) throw std::invalid_argument("count_exact: nothing to enumerate");

    const auto cleared = cleared_height(spec);
    const u128 b128 = bound;
    for (const auto& c : cleared) {
        Mono m;
        m.terms = c.terms;
        m.rhs = 1;
        for (unsigned i = 0; i < c.den; ++i) m.rhs = sat_mul(m.rhs, b128);
        monos_.push_back(std::move(m));
    }
    level_monos_.assign(loop_.size(), {});
    for (std::size_t mi = 0; mi < monos_.size(); ++mi) {
        const auto& m = monos_[mi];
        bool has_free = false, has1 = false, has2 = false;
        unsigned e1 = 0, e2 = 0, fa = 0, fb = 0;
        for (const auto& [v, e] : m.terms) {
            if (level_of_[v] >= 0) level_monos_[level_of_[v]].emplace_back(mi, e);
            if (v == p1_) {
                has1 = true;
                e1 = e;
            } else if (v == p2_) {
                has2 = true;
                e2 = e;
            } else if (spec.variables[v].block == 0) {
                has_free = true;
                if (v == free_[0]) fa = e;
                else fb = e;
            }
        }
        if (has1 && !has2) p1_monos_.emplace_back(mi, e1);
        if (has2 && !has1) p2_monos_.emplace_back(mi, e2);
        if (has_free) {
            free_monos_.push_back({mi, fa, fb});
        } else if (has1 && has2) {
            exact_monos_.push_back(mi);
        }
        if ((has1 || has2) && !loop_.empty()) {
            for (const auto& [v, e] : m.terms) {
                if (v == loop_.back()) p_bounds_inner_ = true;
            }
        }
    }

    level_gcd_.assign(loop_.size(), {});
    for (std::size_t si = 0; si < spec.gcd_sets.size(); ++si) {
        const auto& set = spec.gcd_sets[si];
        FreeGcd fg;
        PGcd pg;
        bool only_loop = true;
        int last = -1;
        for (auto v : set) {
            if (spec.variables[v].block == 0) {
                fg.members |= (v == free_[0]) ? 1 : 2;
                only_loop = false;
            } else if (v == p1_ || v == p2_) {
                (v == p1_ ? pg.has1 : pg.has2) = true;
                fg.others.push_back(v);
                only_loop = false;
            } else {
                last = std::max(last, level_of_[v]);
                pg.loop_members.push_back(v);
                fg.others.push_back(v);
            }
        }
        if (only_loop) {
            level_gcd_[last].push_back(si);
        } else if (fg.members) {
            free_gcd_.push_back(std::move(fg));
        } else {
            p_gcd_.push_back(std::move(pg));
        }
    }

    for (const auto& t : spec.thin) {
        if (level_of_[t.a] < 0 || level_of_[t.b] < 0) {
            throw std::invalid_argument("count_exact: thin predicate must involve enumerated variables");
        }
    }

    // Sign patterns of the looped variables, grouped by what they influence.
    const std::size_t n = loop_.size();
    if (n > 20) throw std::invalid_argument("count_exact: too many enumerated variables");
    std::map<std::pair<std::vector<int>, std::vector<int>>, u64> grouped;
    for (u64 mask = 0; mask < (1ULL << n); ++mask) {
        auto sgn = [&](std::size_t v) { return (mask >> level_of_[v]) & 1 ? -1 : 1; };
        std::vector<int> ts, th;
        for (std::size_t b = 0; b < terms_.size(); ++b) {
            int s = term_block_sign_[b];
            for (const auto& [v, h] : terms_[b]) {
                if (h % 2) s *= sgn(v);
            }
            ts.push_back(s);
        }
        for (const auto& t : spec.thin) th.push_back(sgn(t.a) * sgn(t.b));
        ++grouped[{ts, th}];
    }
    for (const auto& [key, mult] : grouped) groups_.push_back({key.first, key.second, mult});

    const u64 limit = std::min<u64>(2 * bound + 64, 1ULL << 26);
    sieve_ = std::make_unique<SpfSieve>(limit);
}

u64 Engine::level_bound(std::size_t level, const State& st) const {
    u64 best = ~0ULL;
    for (const auto& [mi, e] : level_monos_[level]) {
        const auto& m = monos_[mi];
        u128 prod = 1;
        for (const auto& [v, ex] : m.terms) {
            const int lv = level_of_[v];
            if (lv >= 0 && static_cast<std::size_t>(lv) < level) prod = sat_mul(prod, sat_pow(st.val[v], ex));
        }
        if (prod > m.rhs) return 0;
        best = std::min(best, root_floor(m.rhs / prod, e));
    }
    return best;
}

void Engine::descend(std::size_t level, State& st, u64& total) const {
    if (level + 1 == loop_.size()) {
        innermost(st, total);
        return;
    }
    const u64 ub = level_bound(level, st);
    const std::size_t var = loop_[level];
    for (u64 v = 1; v <= ub; ++v) {
        st.val[var] = v;
        bool ok = true;
        for (auto si : level_gcd_[level]) {
            u64 g = 0;
            for (auto x : spec_.gcd_sets[si]) g = gcd(g, st.val[x]);
            if (g != 1) {
                ok = false;
                break;
            }
        }
        if (ok) descend(level + 1, st, total);
    }
}

void Engine::innermost(State& st, u64& total) const {
    const std::size_t level = loop_.size() - 1;
    const std::size_t var = loop_[level];
    const u64 ub = level_bound(level, st);
    if (ub == 0) return;

    auto p_bound = [&](const std::vector<std::pair<std::size_t, unsigned>>& list) {
        u64 best = ~0ULL;
        for (const auto& [mi, e] : list) {
            const auto& m = monos_[mi];
            u128 prod = 1;
            for (const auto& [v, ex] : m.terms) {
                if (level_of_[v] >= 0) prod = sat_mul(prod, sat_pow(st.val[v], ex));
            }
            if (prod > m.rhs) return u64{0};
            best = std::min(best, root_floor(m.rhs / prod, e));
        }
        return best;
    };

    u64 hi1 = 0, hi2 = 0;
    if (!p_bounds_inner_) {
        st.val[var] = 1;
        hi1 = p_bound(p1_monos_);
        hi2 = p_bound(p2_monos_);
    }
    const u64 free_mult = 1ULL << free_.size();
    std::vector<char> thin_square(spec_.thin.size(), 0);

    for (u64 v = 1; v <= ub; ++v) {
        st.val[var] = v;
        bool ok = true;
        for (auto si : level_gcd_[level]) {
            u64 g = 0;
            for (auto x : spec_.gcd_sets[si]) g = gcd(g, st.val[x]);
            if (g != 1) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        if (p_bounds_inner_) {
            hi1 = p_bound(p1_monos_);
            hi2 = p_bound(p2_monos_);
        }
        if (hi1 == 0 || hi2 == 0) continue;
        for (std::size_t mi = 0; mi < monos_.size(); ++mi) {
            u128 prod = 1;
            for (const auto& [x, ex] : monos_[mi].terms) {
                if (level_of_[x] >= 0) prod = sat_mul(prod, sat_pow(st.val[x], ex));
            }
            st.loop_prod[mi] = prod;
        }
        if (apply_thin_) {
            for (std::size_t t = 0; t < spec_.thin.size(); ++t) {
                const u128 pr = static_cast<u128>(st.val[spec_.thin[t].a]) * st.val[spec_.thin[t].b];
                thin_square[t] = pr <= ~0ULL && is_square(static_cast<u64>(pr));
            }
        }
        std::vector<u128> mag(terms_.size());
        for (std::size_t b = 0; b < terms_.size(); ++b) {
            u128 p = 1;
            for (const auto& [x, h] : terms_[b]) p = sat_mul(p, sat_pow(st.val[x], static_cast<unsigned>(h)));
            mag[b] = p;
        }
        for (const auto& g : groups_) {
            if (apply_thin_) {
                bool thin = false;
                for (std::size_t t = 0; t < g.thin_sign.size(); ++t) {
                    if (g.thin_sign[t] < 0 && thin_square[t]) thin = true;
                }
                if (thin) continue;
            }
            i128 m = 0;
            for (std::size_t b = 0; b < terms_.size(); ++b) {
                m += g.term_sign[b] > 0 ? static_cast<i128>(mag[b]) : -static_cast<i128>(mag[b]);
            }
            if (m == 0) continue;
            const u128 mabs = m < 0 ? static_cast<u128>(-m) : static_cast<u128>(m);
            if (mabs > static_cast<u128>(hi1) * hi2) continue;
            const u64 ma = static_cast<u64>(mabs);
            const u64 lo = (ma + hi2 - 1) / hi2;
            if (lo > hi1) continue;
            const u64 c = pairs_for(ma, lo, hi1, st);
            total += c * g.mult * 2 * free_mult;
        }
    }
}

u64 Engine::pairs_for(u64 mabs, u64 lo, u64 hi, State& st) const {
    u64 primes[64];
    unsigned exps[64];
    const unsigned np = sieve_->factor(mabs, primes, exps);
    auto& divs = st.divs;
    divs.clear();
    divs.push_back(1);
    for (unsigned i = 0; i < np; ++i) {
        const std::size_t sz = divs.size();
        for (std::size_t j = 0; j < sz; ++j) {
            u64 d = divs[j];
            for (unsigned e = 0; e < exps[i]; ++e) {
                if (d > hi / primes[i]) break;
                d *= primes[i];
                divs.push_back(d);
            }
        }
    }
    u64 count = 0;
    for (u64 d : divs) {
        if (d < lo || d > hi) continue;
        const u64 e = mabs / d;
        st.val[p1_] = d;
        st.val[p2_] = e;
        bool ok = true;
        for (const auto& pg : p_gcd_) {
            u64 g = 0;
            for (auto x : pg.loop_members) g = gcd(g, st.val[x]);
            if (pg.has1) g = gcd(g, d);
            if (pg.has2) g = gcd(g, e);
            if (g != 1) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        for (auto mi : exact_monos_) {
            u128 prod = 1;
            for (const auto& [x, ex] : monos_[mi].terms) prod = sat_mul(prod, sat_pow(st.val[x], ex));
            if (prod > monos_[mi].rhs) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        count += free_.empty() ? 1 : free_count(st);
    }
    return count;
}

u64 Engine::free_count(State& st) const {
    // Constraints f1^a f2^b <= R from the monomials that contain free variables.
    struct Con {
        unsigned a, b;
        u128 R;
    };
    Con cons[32];
    unsigned nc = 0;
    u64 u[2] = {~0ULL, ~0ULL};
    for (const auto& fm : free_monos_) {
        u128 prod = st.loop_prod[fm.mono];
        for (const auto& [x, ex] : monos_[fm.mono].terms) {
            if (x == p1_ || x == p2_) prod = sat_mul(prod, sat_pow(st.val[x], ex));
        }
        if (prod > monos_[fm.mono].rhs) return 0;
        const u128 R = monos_[fm.mono].rhs / prod;
        if (fm.a) u[0] = std::min(u[0], root_floor(R, fm.a));
        if (fm.b) u[1] = std::min(u[1], root_floor(R, fm.b));
        if (fm.a && fm.b) cons[nc++] = {fm.a, fm.b, R};
    }
    u64 pr[2][32];
    unsigned npr[2] = {0, 0};
    std::vector<u64> pair_g;  // 0 means plain coprimality of the free pair
    for (const auto& fg : free_gcd_) {
        u64 g = 0;
        for (auto x : fg.others) g = gcd(g, st.val[x]);
        if (fg.members == 3) {
            if (g != 1) pair_g.push_back(g);
            continue;
        }
        const int idx = fg.members == 1 ? 0 : 1;
        if (g == 0) {
            u[idx] = std::min<u64>(u[idx], 1);
        } else if (g > 1) {
            u64 p[64];
            unsigned e[64];
            const unsigned n = sieve_->factor(g, p, e);
            for (unsigned i = 0; i < n; ++i) add_prime(pr[idx], npr[idx], p[i]);
        }
    }
    if (free_.size() == 1) return mobius_count(u[0], pr[0], npr[0]);
    if (u[0] == 0 || u[1] == 0) return 0;

    const int outer = u[0] <= u[1] ? 0 : 1;
    const int inner = 1 - outer;
    u64 total = 0;
    u64 fp[64];
    unsigned fe[64];
    u64 ip[64];
    for (u64 f = 1; f <= u[outer]; ++f) {
        bool ok = true;
        for (unsigned i = 0; i < npr[outer]; ++i) {
            if (f % pr[outer][i] == 0) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        u64 v = u[inner];
        for (unsigned c = 0; c < nc; ++c) {
            const unsigned eo = outer == 0 ? cons[c].a : cons[c].b;
            const unsigned ei = outer == 0 ? cons[c].b : cons[c].a;
            const u128 fpow = sat_pow(f, eo);
            if (fpow > cons[c].R) {
                v = 0;
                break;
            }
            v = std::min(v, root_floor(cons[c].R / fpow, ei));
        }
        if (v == 0) break;  // constraints only tighten as f grows
        unsigned ni = npr[inner];
        std::copy(pr[inner], pr[inner] + ni, ip);
        if (!pair_g.empty() && f > 1) {
            const unsigned nf = sieve_->factor(f, fp, fe);
            for (unsigned i = 0; i < nf; ++i) {
                for (u64 g : pair_g) {
                    if (g == 0 || g % fp[i] == 0) {
                        add_prime(ip, ni, fp[i]);
                        break;
                    }
                }
            }
        }
        total += mobius_count(v, ip, ni);
    }
    return total;
}

u64 Engine::count_slice(unsigned slice) const {
    State st;
    st.val.assign(spec_.size(), 1);
    st.loop_prod.assign(monos_.size(), 1);
    u64 total = 0;
    if (loop_.size() == 1) {
        // degenerate: only one enumerated variable, the slice restricts it directly
        throw std::invalid_argument("count_exact: need at least two enumerated variables");
    }
    const u64 ub = level_bound(0, st);
    const std::size_t var = loop_[0];
    for (u64 v = slice + 1; v <= ub; v += kSlices) {
        st.val[var] = v;
        bool ok = true;
        for (auto si : level_gcd_[0]) {
            u64 g = 0;
            for (auto x : spec_.gcd_sets[si]) g = gcd(g, st.val[x]);
            if (g != 1) ok = false;
        }
        if (ok) descend(1, st, total);
    }
    return total;
}

struct Checkpoint {
    std::string fingerprint;
    u64 bound = 0;
    bool thin = true;
    std::map<unsigned, u64> slices;
};

std::string checkpoint_text(const Checkpoint& c) {
    nlohmann::json j;
    j["fingerprint"] = c.fingerprint;
    j["bound"] = c.bound;
    j["apply_thin"] = c.thin;
    j["slices"] = nlohmann::json::object();
    for (const auto& [id, n] : c.slices) j["slices"][std::to_string(id)] = n;
    return j.dump();
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    Checkpoint c;
    try {
        const auto j = nlohmann::json::parse(ss.str());
        c.fingerprint = j.at("fingerprint").get<std::string>();
        c.bound = j.at("bound").get<u64>();
        c.thin = j.at("apply_thin").get<bool>();
        for (const auto& [k, v] : j.at("slices").items()) {
            const unsigned id = static_cast<unsigned>(std::stoul(k));
            if (id >= kSlices) throw CheckpointError("slice id out of range");
            c.slices[id] = v.get<u64>();
        }
    } catch (const CheckpointError&) {
        throw;
    } catch (const std::exception& e) {
        throw CheckpointError("corrupt checkpoint " + path + ": " + e.what());
    }
    return c;
}

}  // namespace

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

LedgerRow count_exact(const VarietySpec& spec, HeightBound bound, const CountOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const unsigned shards = std::max(1u, options.shards);
    Engine engine(spec, bound.value, options.apply_thin);

    Checkpoint cp;
    cp.fingerprint = fingerprint(spec);
    cp.bound = bound.value;
    cp.thin = options.apply_thin;
    if (options.checkpoint && std::filesystem::exists(*options.checkpoint)) {
        const auto old = load_checkpoint(*options.checkpoint);
        if (old.fingerprint != cp.fingerprint || old.bound != cp.bound || old.thin != cp.thin) {
            throw CheckpointError("checkpoint " + *options.checkpoint + " belongs to a different run");
        }
        cp.slices = old.slices;
    }

    std::mutex mu;
    std::atomic<bool> stop{false};
    unsigned finished = 0;
    std::exception_ptr error;
    auto worker = [&](unsigned shard) {
        try {
            for (unsigned id = shard; id < kSlices; id += shards) {
                {
                    std::lock_guard<std::mutex> lock(mu);
                    if (cp.slices.count(id)) continue;
                }
                if (stop) return;
                const u64 c = engine.count_slice(id);
                std::lock_guard<std::mutex> lock(mu);
                cp.slices[id] = c;
                if (options.checkpoint) write_atomic(*options.checkpoint, checkpoint_text(cp));
                ++finished;
                if (options.stop_after_slices && finished >= *options.stop_after_slices) stop = true;
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            if (!error) error = std::current_exception();
            stop = true;
        }
    };
    if (shards == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned s = 0; s < shards; ++s) pool.emplace_back(worker, s);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    if (cp.slices.size() < kSlices) {
        throw Interrupted("count interrupted after " + std::to_string(cp.slices.size()) + " of " +
                          std::to_string(kSlices) + " slices");
    }

    LedgerRow row;
    row.bound = bound.value;
    for (const auto& [id, n] : cp.slices) row.raw += n;
    row.adjusted = row.raw >> spec.symmetry_rank;
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    row.shards = shards;
    row.fingerprint = cp.fingerprint;
    return row;
}

CountLedger ladder(const VarietySpec& spec, const std::vector<u64>& bounds, const CountOptions& options) {
    if (!std::is_sorted(bounds.begin(), bounds.end())) throw std::invalid_argument("ladder: bounds must ascend");
    CountLedger ledger;
    for (u64 b : bounds) {
        CountOptions o = options;
        if (options.checkpoint) o.checkpoint = *options.checkpoint + "." + std::to_string(b);
        ledger.rows.push_back(count_exact(spec, HeightBound(b), o));
    }
    return ledger;
}

std::string ledger_csv(const CountLedger& ledger) {
    std::ostringstream out;
    for (const auto& [k, v] : ledger.meta) out << "# " << k << ": " << v << '\n';
    out << "B,raw,adjusted,seconds\n";
    for (const auto& r : ledger.rows) out << r.bound << ',' << r.raw << ',' << r.adjusted << ',' << r.seconds << '\n';
    return out.str();
}

CountLedger parse_ledger_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    CountLedger ledger;
    while (std::getline(in, line) && line.rfind("# ", 0) == 0) {
        const auto colon = line.find(": ");
        if (colon == std::string::npos) continue;
        ledger.meta.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
    }
    if (line.rfind("B,raw", 0) != 0) throw std::invalid_argument("ledger: missing header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string f[4];
        for (auto& s : f) std::getline(ls, s, ',');
        LedgerRow r;
        try {
            r.bound = std::stoull(f[0]);
            r.raw = std::stoull(f[1]);
            r.adjusted = std::stoull(f[2]);
            r.seconds = f[3].empty() ? 0.0 : std::stod(f[3]);
        } catch (const std::exception&) {
            throw std::invalid_argument("ledger: malformed row: " + line);
        }
        ledger.rows.push_back(r);
    }
    return ledger;
}

bool ledger_consistent(const VarietySpec& spec, const CountLedger& ledger) {
    const u64 mask = (1ULL << spec.symmetry_rank) - 1;
    for (std::size_t i = 0; i < ledger.rows.size(); ++i) {
        if (ledger.rows[i].raw & mask) return false;
        if (i && ledger.rows[i].raw < ledger.rows[i - 1].raw) return false;
    }
    return true;
}

}  // namespace torsor
