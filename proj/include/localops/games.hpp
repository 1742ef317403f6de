#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "localops/choi.hpp"
#include "localops/complex_matrix.hpp"
#include "localops/layout.hpp"

namespace localops {

// One-round refereed game between two players: the referee prepares a
// question state on V (x) X_1 (x) X_2, the players' joint channel maps the X
// block to A_1 (x) A_2, the referee applies the verdict unitary for that
// question and measures the accept projector.
struct Game {
    std::size_t question_count = 0;
    std::vector<double> prior;              // distribution over questions
    std::size_t referee_dim = 1;            // dimension of the kept register V
    SystemLayout layout;                    // two parties, X_i -> A_i
    std::vector<ComplexMatrix> questions;   // states on V (x) X_1 (x) X_2
    std::vector<ComplexMatrix> verdicts;    // unitaries on V (x) A_1 (x) A_2
    ComplexMatrix accept;                   // projector on V (x) A_1 (x) A_2

    void validate() const;
};

// Win probability of a strategy presented as a Choi matrix.
double simulate(const Game& game, const ChoiOperator& channel);

// Hermitian PSD R on the joint output (x) input space (global ordering) with
// <R, J(channel)> == simulate(game, channel) for every channel.
ComplexMatrix payoff_operator(const Game& game);

// Exhaustive search over deterministic per-party response functions.  Only
// defined for games whose questions are computational-basis products and
// whose rotated accept operators are diagonal.
struct ClassicalStrategy {
    double value = 0.0;
    std::vector<std::vector<std::size_t>> responses; // per party: question -> answer
    std::vector<KrausChannel> party_channels;        // deterministic channels
};

ClassicalStrategy brute_force_classical(const Game& game);

// Nearest CPTP Choi matrix (alternating projections with Dykstra
// correction); layout gives the trace-preservation split.
ChoiOperator cptp_project(const ComplexMatrix& m_global, const SystemLayout& layout,
                          double residual_tol = 1e-7, std::size_t max_iter = 2000);

struct StrategySearchConfig {
    std::size_t env_dim = 2;        // per-party share dimension of the entangled state
    std::size_t restarts = 20;
    std::size_t max_outer = 60;     // block sweeps per restart
    std::size_t max_pg_steps = 200; // projected-gradient steps per block
    double convergence_tol = 1e-7;
    std::uint64_t seed = 1;
    bool seed_with_classical = true; // restart 0 from a deterministic strategy
};

struct SeesawResult {
    double value = 0.0;                  // re-evaluated on the assembled strategy
    ChoiOperator channel;                // assembled Choi, global ordering
    std::vector<ComplexMatrix> party_chois; // per-party Choi on [A_i, X_i, E_i]
    ComplexMatrix sigma;                 // shared state on E_1 (x) E_2
    std::vector<double> history;         // objective after each sweep of the kept restart
    bool converged = false;
    std::size_t best_restart = 0;
};

// Alternating maximization of <R, J(strategy)> over two-party strategies
// with a shared entangled state of per-party dimension config.env_dim.
SeesawResult seesaw_functional(const ComplexMatrix& r_global, const SystemLayout& layout,
                               const StrategySearchConfig& config);

// Same search driven by a game's payoff operator; the reported value is the
// simulated win probability of the assembled strategy.
SeesawResult seesaw_lose(const Game& game, const StrategySearchConfig& config);

enum class InstanceVerdict { yes, no_evidence, unknown };
std::string to_string(InstanceVerdict v);

enum class StrategyClass { losr, lose };

struct ValidityResult {
    InstanceVerdict verdict = InstanceVerdict::unknown;
    double epsilon = 0.0;
    double lower_bound = 0.0; // value of the best feasible strategy found
    double upper_bound = 0.0; // sound bound over the whole class
    ChoiOperator best_channel;
    std::string note;
};

// Does some strategy of the class reach <R, J> >= gamma + 1/s?  YES comes
// with a feasible strategy, NO-evidence from a sound upper bound, otherwise
// UNKNOWN.
ValidityResult weak_validity(const ComplexMatrix& r_global, const SystemLayout& layout,
                             double gamma, std::size_t s, StrategyClass mode,
                             const StrategySearchConfig& config);
ValidityResult weak_validity(const Game& game, double gamma, std::size_t s, StrategyClass mode,
                             const StrategySearchConfig& config);

struct MembershipResult {
    InstanceVerdict verdict = InstanceVerdict::unknown;
    double epsilon = 0.0;
    double fit_residual = 0.0;   // Frobenius gap of the best cone fit found
    double witness_value = 0.0;  // <H, X> for the separating functional, if any
    double witness_margin = 0.0; // required separation epsilon * ||H||_F
    std::string note;
};

// Is X within 1/s (Frobenius) of the cone of LOSR-representable Choi
// matrices?  X must lie in the tensor of the per-party marginal subspaces.
MembershipResult weak_membership(const ComplexMatrix& x_global, const SystemLayout& layout,
                                 std::size_t s, StrategyClass mode,
                                 const StrategySearchConfig& config);

} // namespace localops
