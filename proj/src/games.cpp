#include "localops/games.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "localops/canonical.hpp"
#include "localops/eig.hpp"
#include "localops/errors.hpp"
#include "localops/qspace.hpp"
#include "localops/random.hpp"
#include "localops/tensor.hpp"
#include "localops/witness.hpp"

namespace localops {

namespace {

constexpr double kStructureTol = 1e-8;

void require(bool ok, const std::string& what) {
    if (!ok) throw usage_error(what);
}

// (1_V (x) Phi)(rho): out[(v,a),(w,b)] = sum_{i,k} J[(a,i),(b,k)] rho[(v,i),(w,k)].
ComplexMatrix apply_with_spectator(const ComplexMatrix& j, const ComplexMatrix& rho,
                                   std::size_t d_v, std::size_t d_a, std::size_t d_x) {
    ComplexMatrix out(d_v * d_a, d_v * d_a);
    for (std::size_t v = 0; v < d_v; ++v)
        for (std::size_t a = 0; a < d_a; ++a)
            for (std::size_t w = 0; w < d_v; ++w)
                for (std::size_t b = 0; b < d_a; ++b) {
                    cplx sum(0.0, 0.0);
                    for (std::size_t i = 0; i < d_x; ++i)
                        for (std::size_t k = 0; k < d_x; ++k)
                            sum += j.at(a * d_x + i, b * d_x + k) * rho.at(v * d_x + i, w * d_x + k);
                    out.at(v * d_a + a, w * d_a + b) = sum;
                }
    return out;
}

// Accept operator pulled back through the verdict: M_i = V_i* accept V_i.
ComplexMatrix rotated_accept(const Game& game, std::size_t i) {
    return game.verdicts[i].adjoint() * game.accept * game.verdicts[i];
}

} // namespace

void Game::validate() const {
    layout.validate();
    require(layout.party_count() == 2, "game: exactly two players are supported");
    require(question_count >= 1, "game: at least one question required");
    require(prior.size() == question_count && questions.size() == question_count &&
                verdicts.size() == question_count,
            "game: prior/questions/verdicts size mismatch");
    require(referee_dim >= 1, "game: referee dimension must be positive");

    double total = 0.0;
    for (double p : prior) {
        require(p >= -1e-12, "game: negative prior entry");
        total += p;
    }
    require(std::abs(total - 1.0) <= 1e-10, "game: prior must sum to one");

    const std::size_t dq = referee_dim * layout.din_total();
    const std::size_t dr = referee_dim * layout.dout_total();
    for (std::size_t i = 0; i < question_count; ++i) {
        const ComplexMatrix& rho = questions[i];
        require(rho.is_square() && rho.rows() == dq, "game: question dimension mismatch");
        require(rho.hermiticity_defect() <= kStructureTol * std::max(1.0, fro_norm(rho)),
                "game: question state is not Hermitian");
        require(std::abs(rho.trace() - cplx(1.0, 0.0)) <= kStructureTol,
                "game: question state must have unit trace");
        require(min_eigenvalue(rho.hermitian_part()) >= -kStructureTol,
                "game: question state is not positive semidefinite");

        const ComplexMatrix& u = verdicts[i];
        require(u.is_square() && u.rows() == dr, "game: verdict dimension mismatch");
        require(fro_norm(u.adjoint() * u - ComplexMatrix::identity(dr)) <= kStructureTol * dr,
                "game: verdict is not unitary");
    }

    require(accept.is_square() && accept.rows() == dr, "game: accept dimension mismatch");
    require(accept.hermiticity_defect() <= kStructureTol, "game: accept is not Hermitian");
    require(fro_norm(accept * accept - accept) <= kStructureTol * dr,
            "game: accept is not a projector");
}

double simulate(const Game& game, const ChoiOperator& channel) {
    game.validate();
    channel.validate();
    require(channel.layout == game.layout, "simulate: channel layout does not match the game");

    const std::size_t d_v = game.referee_dim;
    const std::size_t d_a = game.layout.dout_total();
    const std::size_t d_x = game.layout.din_total();

    double value = 0.0;
    for (std::size_t i = 0; i < game.question_count; ++i) {
        if (game.prior[i] == 0.0) continue;
        ComplexMatrix out = apply_with_spectator(channel.matrix, game.questions[i], d_v, d_a, d_x);
        ComplexMatrix rotated = game.verdicts[i] * out * game.verdicts[i].adjoint();
        value += game.prior[i] * hs_inner(game.accept, rotated).real();
    }
    return value;
}

ComplexMatrix payoff_operator(const Game& game) {
    game.validate();

    const std::size_t d_v = game.referee_dim;
    const std::size_t d_a = game.layout.dout_total();
    const std::size_t d_x = game.layout.din_total();
    const std::size_t d = d_a * d_x;

    std::vector<ComplexMatrix> rotated;
    rotated.reserve(game.question_count);
    for (std::size_t i = 0; i < game.question_count; ++i) rotated.push_back(rotated_accept(game, i));

    // <R, J> = sum_i pi_i tr[M_i (1 (x) Phi)(rho_i)] for every Choi J, so
    // R[(a,x),(b,y)] = conj( sum_i pi_i sum_{v,w} M_i[(w,b),(v,a)] rho_i[(v,x),(w,y)] ).
    ComplexMatrix r(d, d);
    for (std::size_t a = 0; a < d_a; ++a)
        for (std::size_t x = 0; x < d_x; ++x)
            for (std::size_t b = 0; b < d_a; ++b)
                for (std::size_t y = 0; y < d_x; ++y) {
                    cplx sum(0.0, 0.0);
                    for (std::size_t i = 0; i < game.question_count; ++i) {
                        if (game.prior[i] == 0.0) continue;
                        const ComplexMatrix& m = rotated[i];
                        const ComplexMatrix& rho = game.questions[i];
                        cplx inner(0.0, 0.0);
                        for (std::size_t v = 0; v < d_v; ++v)
                            for (std::size_t w = 0; w < d_v; ++w)
                                inner += m.at(w * d_a + b, v * d_a + a) * rho.at(v * d_x + x, w * d_x + y);
                        sum += game.prior[i] * inner;
                    }
                    r.at(a * d_x + x, b * d_x + y) = std::conj(sum);
                }
    return r.hermitian_part();
}

ClassicalStrategy brute_force_classical(const Game& game) {
    game.validate();

    const std::size_t din1 = game.layout.parties[0].din;
    const std::size_t din2 = game.layout.parties[1].din;
    const std::size_t dout1 = game.layout.parties[0].dout;
    const std::size_t dout2 = game.layout.parties[1].dout;

    // Decode the classical structure: every question must be a
    // computational-basis product state, every rotated accept diagonal.
    std::vector<std::size_t> qv(game.question_count), q1(game.question_count), q2(game.question_count);
    std::vector<std::vector<double>> accept_diag(game.question_count);
    for (std::size_t i = 0; i < game.question_count; ++i) {
        const ComplexMatrix& rho = game.questions[i];
        std::size_t basis = 0;
        double best = -1.0;
        for (std::size_t t = 0; t < rho.rows(); ++t)
            if (rho.at(t, t).real() > best) {
                best = rho.at(t, t).real();
                basis = t;
            }
        ComplexMatrix unit = ComplexMatrix::zero(rho.rows(), rho.rows());
        unit.at(basis, basis) = cplx(1.0, 0.0);
        require(fro_norm(rho - unit) <= 1e-10 * std::max(1.0, fro_norm(rho)),
                "brute_force_classical: question is not a computational-basis product");
        qv[i] = basis / (din1 * din2);
        q1[i] = (basis / din2) % din1;
        q2[i] = basis % din2;

        ComplexMatrix m = rotated_accept(game, i);
        double offdiag = 0.0;
        accept_diag[i].resize(m.rows());
        for (std::size_t r = 0; r < m.rows(); ++r) {
            accept_diag[i][r] = m.at(r, r).real();
            for (std::size_t c = 0; c < m.cols(); ++c)
                if (r != c) offdiag = std::max(offdiag, std::abs(m.at(r, c)));
        }
        require(offdiag <= 1e-10 * std::max(1.0, fro_norm(m)),
                "brute_force_classical: rotated accept operator is not diagonal");
    }

    double combos = std::pow(double(dout1), double(din1)) * std::pow(double(dout2), double(din2));
    require(combos <= 1e7, "brute_force_classical: response table too large to enumerate");

    auto advance = [](std::vector<std::size_t>& f, std::size_t base) {
        for (std::size_t pos = 0; pos < f.size(); ++pos) {
            if (++f[pos] < base) return true;
            f[pos] = 0;
        }
        return false;
    };

    ClassicalStrategy bestres;
    bestres.value = -std::numeric_limits<double>::infinity();

    std::vector<std::size_t> f(din1, 0);
    do {
        std::vector<std::size_t> g(din2, 0);
        do {
            double value = 0.0;
            for (std::size_t i = 0; i < game.question_count; ++i) {
                std::size_t out = qv[i] * dout1 * dout2 + f[q1[i]] * dout2 + g[q2[i]];
                value += game.prior[i] * accept_diag[i][out];
            }
            if (value > bestres.value + 1e-15) {
                bestres.value = value;
                bestres.responses = {f, g};
            }
        } while (advance(g, dout2));
    } while (advance(f, dout1));

    auto deterministic = [](const std::vector<std::size_t>& table, std::size_t din,
                            std::size_t dout, const PartyDims& dims) {
        std::vector<ComplexMatrix> kraus;
        for (std::size_t s = 0; s < din; ++s) {
            ComplexMatrix k = ComplexMatrix::zero(dout, din);
            k.at(table[s], s) = cplx(1.0, 0.0);
            kraus.push_back(k);
        }
        return KrausChannel{SystemLayout({dims}), kraus};
    };
    bestres.party_channels = {
        deterministic(bestres.responses[0], din1, dout1, game.layout.parties[0]),
        deterministic(bestres.responses[1], din2, dout2, game.layout.parties[1]),
    };
    return bestres;
}

// ---------------------------------------------------------------------------
// nearest CPTP Choi

namespace {

// Orthogonal projection onto the trace-preserving affine slice:
// Y + (1/d_A) I_A (x) (I_X - Tr_A Y).
ComplexMatrix tp_project(const ComplexMatrix& y, std::size_t d_a, std::size_t d_x) {
    FactorShape coarse({d_a, d_x});
    ComplexMatrix marg = partial_trace(y, coarse, SubsystemSelector({0}));
    ComplexMatrix fix = kron(ComplexMatrix::identity(d_a),
                             ComplexMatrix::identity(d_x) - marg) * cplx(1.0 / double(d_a), 0.0);
    return y + fix;
}

} // namespace

ChoiOperator cptp_project(const ComplexMatrix& m_global, const SystemLayout& layout,
                          double residual_tol, std::size_t max_iter) {
    layout.validate();
    require(m_global.is_square() && m_global.rows() == layout.choi_dim(),
            "cptp_project: dimension mismatch with layout");

    const std::size_t d_a = layout.dout_total();
    const std::size_t d_x = layout.din_total();

    // Dykstra-corrected alternating projections between the PSD cone and the
    // trace-preserving slice; the correction applies to the cone only.
    ComplexMatrix x = m_global.hermitian_part();
    ComplexMatrix p = ComplexMatrix::zero(x.rows(), x.cols());
    double defect = 0.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        ComplexMatrix y = psd_project(x + p);
        p = x + p - y;
        x = tp_project(y, d_a, d_x);
        defect = min_eigenvalue(x);
        if (defect >= -residual_tol) return ChoiOperator{layout, x};
    }
    std::ostringstream msg;
    msg << "cptp_project: no convergence after " << max_iter
        << " iterations (eigenvalue defect " << defect << ")";
    throw numerical_error(msg.str());
}

// ---------------------------------------------------------------------------
// alternating strategy search

namespace {

struct PartySpace {
    std::size_t din = 1;
    std::size_t dout = 1;
    std::size_t env = 1;

    std::size_t choi_dim() const { return din * env * dout; }
    SystemLayout lifted_layout() const {
        return SystemLayout({PartyDims{din * env, dout}});
    }
};

struct Strategy {
    ComplexMatrix j1;    // Choi on [A_1, X_1, E_1]
    ComplexMatrix j2;    // Choi on [A_2, X_2, E_2]
    ComplexMatrix sigma; // shared state on E_1 (x) E_2
};

// Joint Choi of Psi_1 (x) Psi_2 reordered to [A_1, A_2, X_1, X_2, E_1, E_2].
ComplexMatrix axe_choi(const Strategy& st, const PartySpace& p1, const PartySpace& p2) {
    FactorShape shape({p1.dout, p1.din, p1.env, p2.dout, p2.din, p2.env});
    return permute_subsystems(kron(st.j1, st.j2), shape, {0, 3, 1, 4, 2, 5});
}

ComplexMatrix assemble_strategy(const Strategy& st, const PartySpace& p1, const PartySpace& p2) {
    ComplexMatrix axe = axe_choi(st, p1, p2);
    return restrict_by_state(axe, p1.dout * p2.dout, p1.din * p2.din, p1.env * p2.env, st.sigma);
}

// Payoff functional lifted to the party-ordered product space: with
// W = perm(R (x) conj(sigma)), <R, J(strategy)> = <W, J_1 (x) J_2>.
ComplexMatrix party_ordered_payoff(const ComplexMatrix& r_global, const ComplexMatrix& sigma,
                                   const PartySpace& p1, const PartySpace& p2) {
    FactorShape shape({p1.dout, p2.dout, p1.din, p2.din, p1.env, p2.env});
    return permute_subsystems(kron(r_global, sigma.conj()), shape, {0, 2, 4, 1, 3, 5});
}

// Monotone projected-ascent pass for one party block: the objective is
// linear, so each projected step can only improve <grad, J>.
void pga_block(ComplexMatrix& j, const ComplexMatrix& grad, const SystemLayout& lifted,
               const StrategySearchConfig& cfg) {
    double l = op_norm(grad);
    if (l < 1e-13) return;
    double value = hs_inner(grad, j).real();
    for (std::size_t step = 0; step < cfg.max_pg_steps; ++step) {
        ComplexMatrix candidate = j + grad * cplx(1.0 / l, 0.0);
        ComplexMatrix projected = cptp_project(candidate, lifted, 1e-9, 4000).matrix;
        double next = hs_inner(grad, projected).real();
        if (next > value) j = projected;
        if (next <= value + 1e-10 * std::max(1.0, std::abs(value))) break;
        value = next;
    }
}

ComplexMatrix unit_state(std::size_t dim, std::size_t index) {
    ComplexMatrix s = ComplexMatrix::zero(dim, dim);
    s.at(index, index) = cplx(1.0, 0.0);
    return s;
}

// Psi_i = Phi_i after discarding the environment share: Kraus K (x) <j|.
ComplexMatrix lift_with_discard(const KrausChannel& base, std::size_t env) {
    const std::size_t dout = base.layout.dout_total();
    const std::size_t din = base.layout.din_total();
    std::vector<ComplexMatrix> lifted;
    for (const ComplexMatrix& k : base.kraus)
        for (std::size_t j = 0; j < env; ++j) {
            ComplexMatrix op = ComplexMatrix::zero(dout, din * env);
            for (std::size_t a = 0; a < dout; ++a)
                for (std::size_t x = 0; x < din; ++x)
                    op.at(a, x * env + j) = k.at(a, x);
            lifted.push_back(op);
        }
    KrausChannel ch{SystemLayout({PartyDims{din * env, dout}}), lifted};
    return choi_of_kraus(ch).matrix;
}

KrausChannel constant_response_channel(const PartyDims& dims) {
    std::vector<ComplexMatrix> kraus;
    for (std::size_t s = 0; s < dims.din; ++s) {
        ComplexMatrix k = ComplexMatrix::zero(dims.dout, dims.din);
        k.at(0, s) = cplx(1.0, 0.0);
        kraus.push_back(k);
    }
    return KrausChannel{SystemLayout({dims}), kraus};
}

SeesawResult seesaw_core(const ComplexMatrix& r_global, const SystemLayout& layout,
                         const StrategySearchConfig& cfg,
                         const std::vector<KrausChannel>* warm_start) {
    layout.validate();
    require(layout.party_count() == 2, "strategy search: exactly two players are supported");
    require(cfg.env_dim >= 1, "strategy search: share dimension must be positive");
    require(cfg.restarts >= 1, "strategy search: at least one restart required");
    require(r_global.is_square() && r_global.rows() == layout.choi_dim(),
            "strategy search: payoff dimension mismatch");
    require(r_global.hermiticity_defect() <= 1e-8 * std::max(1.0, fro_norm(r_global)),
            "strategy search: payoff must be Hermitian");

    PartySpace p1{layout.parties[0].din, layout.parties[0].dout, cfg.env_dim};
    PartySpace p2{layout.parties[1].din, layout.parties[1].dout, cfg.env_dim};
    const std::size_t d_ax = layout.choi_dim();
    const std::size_t env_total = p1.env * p2.env;
    const ComplexMatrix r = r_global.hermitian_part();

    SeesawResult best;
    best.value = -std::numeric_limits<double>::infinity();

    for (std::size_t restart = 0; restart < cfg.restarts; ++restart) {
        RandomSource rng(cfg.seed + 0x9e3779b97f4a7c15ULL * (restart + 1));
        Strategy st;
        if (restart == 0 && cfg.seed_with_classical) {
            const KrausChannel seed1 =
                warm_start ? (*warm_start)[0] : constant_response_channel(layout.parties[0]);
            const KrausChannel seed2 =
                warm_start ? (*warm_start)[1] : constant_response_channel(layout.parties[1]);
            st.j1 = lift_with_discard(seed1, p1.env);
            st.j2 = lift_with_discard(seed2, p2.env);
            st.sigma = unit_state(env_total, 0);
        } else {
            auto rank = [](const PartySpace& p) { return (p.din * p.env) / p.dout + 1; };
            st.j1 = choi_of_kraus(random_cptp(p1.lifted_layout(), rank(p1), rng)).matrix;
            st.j2 = choi_of_kraus(random_cptp(p2.lifted_layout(), rank(p2), rng)).matrix;
            st.sigma = rng.density(env_total);
        }

        bool converged = false;
        std::vector<double> history;
        double value = -std::numeric_limits<double>::infinity();
        for (std::size_t outer = 0; outer < cfg.max_outer; ++outer) {
            ComplexMatrix w = party_ordered_payoff(r, st.sigma, p1, p2);

            ComplexMatrix g1 = restrict_by_state(w, p1.choi_dim(), 1, p2.choi_dim(), st.j2.conj());
            pga_block(st.j1, g1.hermitian_part(), p1.lifted_layout(), cfg);

            ComplexMatrix g2 = functional_on_leading_block(st.j1, w, p1.choi_dim(), p2.choi_dim());
            pga_block(st.j2, g2.hermitian_part(), p2.lifted_layout(), cfg);

            ComplexMatrix axe = axe_choi(st, p1, p2);
            ComplexMatrix t = functional_on_leading_block(r, axe, d_ax, env_total);
            EigResult eig = hermitian_eig(t.hermitian_part());
            ComplexMatrix sigma(env_total, env_total);
            for (std::size_t g = 0; g < env_total; ++g)
                for (std::size_t h = 0; h < env_total; ++h)
                    sigma.at(g, h) = std::conj(eig.vectors.at(g, 0)) * eig.vectors.at(h, 0);
            st.sigma = sigma;

            double next = eig.values[0];
            history.push_back(next);
            if (next - value <= cfg.convergence_tol * std::max(1.0, std::abs(next))) {
                value = std::max(value, next);
                converged = true;
                break;
            }
            value = next;
        }

        ComplexMatrix assembled = assemble_strategy(st, p1, p2);
        double exact = hs_inner(r, assembled).real();
        if (exact > best.value) {
            best.value = exact;
            best.channel = ChoiOperator{layout, assembled};
            best.party_chois = {st.j1, st.j2};
            best.sigma = st.sigma;
            best.history = history;
            best.converged = converged;
            best.best_restart = restart;
        }
    }
    return best;
}

} // namespace

SeesawResult seesaw_functional(const ComplexMatrix& r_global, const SystemLayout& layout,
                               const StrategySearchConfig& config) {
    return seesaw_core(r_global, layout, config, nullptr);
}

SeesawResult seesaw_lose(const Game& game, const StrategySearchConfig& config) {
    game.validate();
    ComplexMatrix r = payoff_operator(game);

    std::vector<KrausChannel> classical;
    const std::vector<KrausChannel>* warm = nullptr;
    if (config.seed_with_classical) {
        try {
            classical = brute_force_classical(game).party_channels;
            warm = &classical;
        } catch (const usage_error&) {
            // not a classical game; fall back to the default seed
        }
    }

    SeesawResult result = seesaw_core(r, game.layout, config, warm);
    result.value = simulate(game, result.channel);
    return result;
}

// ---------------------------------------------------------------------------
// weak instance evaluators

std::string to_string(InstanceVerdict v) {
    switch (v) {
        case InstanceVerdict::yes: return "YES";
        case InstanceVerdict::no_evidence: return "NO-evidence";
        default: return "UNKNOWN";
    }
}

namespace {

// sum_i lambda_i c_i with c_i >= 0 summing to tr J = d_X is maximized by
// putting the whole budget on the top eigenvalue.
double cptp_upper_bound(const ComplexMatrix& r, const SystemLayout& layout) {
    EigResult eig = hermitian_eig(r.hermitian_part());
    return eig.values[0] * double(layout.din_total());
}

ValidityResult validity_from_bounds(double gamma, std::size_t s, double lower, double upper,
                                    const std::string& upper_kind) {
    require(s >= 1, "weak_validity: precision denominator must be positive");
    ValidityResult res;
    res.epsilon = 1.0 / double(s);
    res.lower_bound = lower;
    res.upper_bound = upper;
    if (lower >= gamma + res.epsilon - 1e-12) {
        res.verdict = InstanceVerdict::yes;
        res.note = "feasible strategy reaches the threshold";
    } else if (upper <= gamma - res.epsilon + 1e-12) {
        res.verdict = InstanceVerdict::no_evidence;
        res.note = "upper bound (" + upper_kind + ") rules the threshold out";
    } else {
        res.verdict = InstanceVerdict::unknown;
        res.note = "bounds straddle the threshold";
    }
    return res;
}

} // namespace

ValidityResult weak_validity(const ComplexMatrix& r_global, const SystemLayout& layout,
                             double gamma, std::size_t s, StrategyClass mode,
                             const StrategySearchConfig& config) {
    StrategySearchConfig cfg = config;
    if (mode == StrategyClass::losr) cfg.env_dim = 1;
    SeesawResult sw = seesaw_functional(r_global, layout, cfg);
    ValidityResult res = validity_from_bounds(gamma, s, sw.value,
                                              cptp_upper_bound(r_global, layout), "spectral");
    res.best_channel = sw.channel;
    return res;
}

ValidityResult weak_validity(const Game& game, double gamma, std::size_t s, StrategyClass mode,
                             const StrategySearchConfig& config) {
    StrategySearchConfig cfg = config;
    if (mode == StrategyClass::losr) cfg.env_dim = 1;
    SeesawResult sw = seesaw_lose(game, cfg);

    ComplexMatrix r = payoff_operator(game);
    double upper = cptp_upper_bound(r, game.layout);
    std::string kind = "spectral";
    if (mode == StrategyClass::losr) {
        try {
            double classical = brute_force_classical(game).value;
            if (classical < upper) {
                upper = classical;
                kind = "exhaustive classical";
            }
        } catch (const usage_error&) {
            // no exact bound available for non-classical games
        }
    }

    ValidityResult res = validity_from_bounds(gamma, s, sw.value, upper, kind);
    res.best_channel = sw.channel;
    return res;
}

MembershipResult weak_membership(const ComplexMatrix& x_global, const SystemLayout& layout,
                                 std::size_t s, StrategyClass mode,
                                 const StrategySearchConfig& config) {
    (void)mode; // YES evidence is constructive for the smaller class already
    layout.validate();
    require(s >= 1, "weak_membership: precision denominator must be positive");
    require(x_global.is_square() && x_global.rows() == layout.choi_dim(),
            "weak_membership: dimension mismatch with layout");
    require(x_global.hermiticity_defect() <= 1e-8 * std::max(1.0, fro_norm(x_global)),
            "weak_membership: input must be Hermitian");

    MembershipReport membership = in_tensor_Q(x_global, layout);
    if (!membership.member)
        throw contract_error("weak_membership: input lies outside the tensor marginal subspace");

    MembershipResult res;
    res.epsilon = 1.0 / double(s);
    const std::size_t dim = layout.choi_dim();

    // Route 1: inside the guaranteed ball around the central ray.
    BallParameters ball = ball_parameters(layout);
    double center = (x_global.trace() / cplx(double(dim), 0.0)).real();
    double spread = fro_norm(x_global - ComplexMatrix::identity(dim) * cplx(center, 0.0));
    if (center > 0.0 && ball.k * spread <= center * (1.0 + 1e-12)) {
        res.verdict = InstanceVerdict::yes;
        res.note = "within the guaranteed ball around the noisy ray";
        return res;
    }

    // Route 2: conic fit by product-strategy atoms.  Each round adds the
    // atom best aligned with the current residual, re-solves the
    // nonnegative weights over every atom collected so far (coordinate
    // descent on the small Gram system), then re-optimizes each weighted
    // atom against its own share of the residual, so early rough atoms
    // keep improving as the fit tightens.
    StrategySearchConfig atom_cfg = config;
    atom_cfg.env_dim = 1;
    atom_cfg.restarts = std::max<std::size_t>(2, config.restarts / 4);
    atom_cfg.max_outer = std::min<std::size_t>(config.max_outer, 25);
    atom_cfg.max_pg_steps = std::min<std::size_t>(config.max_pg_steps, 80);
    atom_cfg.seed_with_classical = false;

    StrategySearchConfig polish_cfg = atom_cfg;
    polish_cfg.restarts = 1;
    polish_cfg.seed_with_classical = true; // the single restart is the warm start

    std::vector<ComplexMatrix> atoms;
    std::vector<std::vector<ComplexMatrix>> parts; // per-party Chois of each atom
    std::vector<double> alpha;
    const auto refit = [&]() {
        const std::size_t k = atoms.size();
        std::vector<double> b(k), gram(k * k);
        for (std::size_t i = 0; i < k; ++i) {
            b[i] = hs_inner(atoms[i], x_global).real();
            for (std::size_t j = 0; j <= i; ++j) {
                double g = hs_inner(atoms[i], atoms[j]).real();
                gram[i * k + j] = gram[j * k + i] = g;
            }
        }
        for (int sweep = 0; sweep < 400; ++sweep) {
            double change = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                double row = 0.0;
                for (std::size_t j = 0; j < k; ++j)
                    if (j != i) row += gram[i * k + j] * alpha[j];
                double next = gram[i * k + i] > 0.0 ? std::max(0.0, (b[i] - row) / gram[i * k + i]) : 0.0;
                change = std::max(change, std::abs(next - alpha[i]));
                alpha[i] = next;
            }
            if (change <= 1e-13) break;
        }
        ComplexMatrix fit = ComplexMatrix::zero(dim, dim);
        for (std::size_t i = 0; i < k; ++i)
            if (alpha[i] > 0.0) fit += atoms[i] * cplx(alpha[i], 0.0);
        return x_global - fit;
    };

    // The central product channel is free evidence and anchors the fit.
    atoms.push_back(ComplexMatrix::identity(dim) * cplx(1.0 / double(layout.dout_total()), 0.0));
    {
        std::vector<ComplexMatrix> central;
        for (const PartyDims& p : layout.parties)
            central.push_back(ComplexMatrix::identity(p.din * p.dout) * cplx(1.0 / double(p.dout), 0.0));
        parts.push_back(std::move(central));
    }
    alpha.push_back(0.0);
    ComplexMatrix residual = refit();
    res.fit_residual = fro_norm(residual);

    // Re-fit one atom to "its share" residual + alpha_i * atom_i by a
    // warm-started ascent; accept only if the overall fit improves.
    const auto polish_pass = [&]() {
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (alpha[i] <= 1e-12) continue;
            ComplexMatrix share = residual + atoms[i] * cplx(alpha[i], 0.0);
            std::vector<KrausChannel> warm;
            for (std::size_t p = 0; p < layout.party_count(); ++p)
                warm.push_back(
                    kraus_of_choi(ChoiOperator{SystemLayout({layout.parties[p]}), parts[i][p]}));
            SeesawResult polished = seesaw_core(share.hermitian_part(), layout, polish_cfg, &warm);
            if (hs_inner(polished.channel.matrix - atoms[i], share).real() <= 0.0) continue;
            ComplexMatrix atom_bak = atoms[i];
            std::vector<ComplexMatrix> parts_bak = parts[i];
            std::vector<double> alpha_bak = alpha;
            atoms[i] = polished.channel.matrix;
            parts[i] = polished.party_chois;
            ComplexMatrix next = refit();
            double next_norm = fro_norm(next);
            if (next_norm < res.fit_residual) {
                residual = next;
                res.fit_residual = next_norm;
            } else {
                atoms[i] = std::move(atom_bak);
                parts[i] = std::move(parts_bak);
                alpha = std::move(alpha_bak);
            }
        }
    };

    const std::size_t fit_budget = std::max<std::size_t>(6, config.max_outer / 2);
    for (std::size_t it = 0; it < fit_budget; ++it) {
        if (res.fit_residual <= res.epsilon * 0.999) break;
        atom_cfg.seed = config.seed + 101 * (it + 1);
        SeesawResult atom = seesaw_functional(residual, layout, atom_cfg);
        bool added = hs_inner(atom.channel.matrix, residual).real() >
                     1e-10 * std::max(1.0, res.fit_residual);
        if (added) {
            atoms.push_back(atom.channel.matrix);
            parts.push_back(atom.party_chois);
            alpha.push_back(0.0);
            residual = refit();
            res.fit_residual = fro_norm(residual);
        }
        double before = res.fit_residual;
        polish_pass();
        if (!added && res.fit_residual >= before - 1e-12) break;
    }
    if (res.fit_residual <= res.epsilon * 0.999) {
        res.verdict = InstanceVerdict::yes;
        res.note = "explicit conic fit within tolerance";
        return res;
    }

    // Route 3: audited separating functionals.
    std::vector<ComplexMatrix> candidates;
    if (layout == SystemLayout({PartyDims{2, 2}, PartyDims{2, 2}})) candidates.push_back(chsh_witness());
    if (res.fit_residual > 3.0 * res.epsilon) {
        double rn = fro_norm(residual);
        if (rn > 1e-12) candidates.push_back(-residual * cplx(1.0 / rn, 0.0));
    }

    AuditConfig audit_cfg;
    audit_cfg.restarts = std::max<std::size_t>(8, config.restarts);
    audit_cfg.seed = config.seed + 7777;
    for (const ComplexMatrix& h : candidates) {
        double value = functional_value(h, x_global);
        double needed = res.epsilon * fro_norm(h);
        if (value >= 0.0 || -value <= needed * 1.05) continue;
        AuditResult audit = audit_positivity_on_cone(h, layout, audit_cfg);
        if (audit.min_value >= -1e-6) {
            res.verdict = InstanceVerdict::no_evidence;
            res.witness_value = value;
            res.witness_margin = needed;
            res.note = "audited functional separates the input";
            return res;
        }
        // Salvage: lift the audited floor back to zero and retest the margin.
        double shift = -audit.min_value + 1e-7;
        ComplexMatrix lifted =
            h + ComplexMatrix::identity(dim) * cplx(shift / double(layout.din_total()), 0.0);
        double lifted_value = functional_value(lifted, x_global);
        double lifted_needed = res.epsilon * fro_norm(lifted);
        if (lifted_value < 0.0 && -lifted_value > lifted_needed * 1.05) {
            AuditResult recheck = audit_positivity_on_cone(lifted, layout, audit_cfg);
            if (recheck.min_value >= -1e-6) {
                res.verdict = InstanceVerdict::no_evidence;
                res.witness_value = lifted_value;
                res.witness_margin = lifted_needed;
                res.note = "audited functional separates the input";
                return res;
            }
        }
    }

    res.verdict = InstanceVerdict::unknown;
    res.note = "no fit or separating functional within budget";
    return res;
}

} // namespace localops
