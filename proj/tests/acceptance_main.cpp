// Acceptance gate: ten end-to-end checks with hard tolerances and runtime
// caps.  Each criterion prints exactly one PASS/FAIL line; the process exits
// with the number of failed criteria.

#include "localops/canonical.hpp"
#include "localops/choi.hpp"
#include "localops/eig.hpp"
#include "localops/games.hpp"
#include "localops/layout.hpp"
#include "localops/losr.hpp"
#include "localops/nosignal.hpp"
#include "localops/qspace.hpp"
#include "localops/random.hpp"
#include "localops/sep.hpp"
#include "localops/tensor.hpp"
#include "localops/witness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace localops;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

const SystemLayout kQubits{{{2, 2}, {2, 2}}};

ComplexMatrix basis_unit(std::size_t d, std::size_t i, std::size_t j) {
    ComplexMatrix m(d, d);
    m.at(i, j) = 1.0;
    return m;
}

// X -> tr(X) I: Kraus units e_a e_x^T without normalization; its Choi is the
// exact identity matrix.
KrausChannel unnormalized_noisy(const SystemLayout& layout) {
    const std::size_t d_a = layout.dout_total();
    const std::size_t d_x = layout.din_total();
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(d_a * d_x);
    for (std::size_t a = 0; a < d_a; ++a)
        for (std::size_t x = 0; x < d_x; ++x) {
            ComplexMatrix k(d_a, d_x);
            k.at(a, x) = 1.0;
            kraus.push_back(k);
        }
    return KrausChannel{layout, kraus};
}

// Random element of the tensor product of the per-party marginal subspaces,
// in global ordering.
ComplexMatrix random_tensor_q(const SystemLayout& layout, RandomSource& rng) {
    std::vector<std::vector<ComplexMatrix>> bases;
    for (const auto& p : layout.parties) bases.push_back(party_basis(p, CertSpace::q_subspace));
    ComplexMatrix grouped(layout.choi_dim(), layout.choi_dim());
    std::vector<std::size_t> idx(bases.size(), 0);
    // Dense loop over the product basis is fine at desk scale (169 terms).
    bool done = false;
    while (!done) {
        ComplexMatrix term = bases[0][idx[0]];
        for (std::size_t p = 1; p < bases.size(); ++p) term = kron(term, bases[p][idx[p]]);
        grouped = grouped + term * rng.gauss();
        done = true;
        for (std::size_t p = bases.size(); p-- > 0;) {
            if (++idx[p] < bases[p].size()) {
                done = false;
                break;
            }
            idx[p] = 0;
        }
    }
    return to_global(grouped, layout);
}

KrausChannel random_party_channel(PartyDims dims, RandomSource& rng) {
    std::size_t rank = 1 + rng.index(3);
    while (dims.dout * rank < dims.din) ++rank;
    return random_cptp(SystemLayout{{dims}}, rank, rng);
}

// Convex mixture of product channels: exactly LOSR-representable.
ChoiOperator random_losr_mixture(const SystemLayout& layout, RandomSource& rng,
                                 std::size_t max_terms) {
    const std::size_t terms = 1 + rng.index(max_terms);
    std::vector<double> probs(terms);
    double total = 0;
    for (auto& p : probs) {
        p = 0.05 + rng.uniform();
        total += p;
    }
    ComplexMatrix mix(layout.choi_dim(), layout.choi_dim());
    for (std::size_t t = 0; t < terms; ++t) {
        std::vector<ChoiOperator> parts;
        for (const auto& dims : layout.parties)
            parts.push_back(choi_of_kraus(random_party_channel(dims, rng)));
        mix = mix + product_choi(parts).matrix * (probs[t] / total);
    }
    return ChoiOperator{layout, mix};
}

Game random_game(RandomSource& rng, const SystemLayout& layout, std::size_t d_v,
                 std::size_t questions) {
    Game g;
    g.question_count = questions;
    g.referee_dim = d_v;
    g.layout = layout;
    const std::size_t joint = d_v * layout.din_total();
    double total = 0;
    for (std::size_t i = 0; i < questions; ++i) {
        g.prior.push_back(0.2 + rng.uniform());
        total += g.prior.back();
        g.questions.push_back(rng.density(joint));
        g.verdicts.push_back(rng.unitary(d_v * layout.dout_total()));
    }
    for (auto& p : g.prior) p /= total;
    const std::size_t out_dim = d_v * layout.dout_total();
    g.accept = rng.projector(out_dim, 1 + rng.index(out_dim - 1));
    return g;
}

// ------------------------------------------------------------ criteria ----

void criterion_choi_calculus(Outcome& out) {
    // The fully noisy map's Choi matrix must be the identity, bit for bit.
    for (std::size_t parties = 1; parties <= 3; ++parties) {
        SystemLayout layout{std::vector<PartyDims>(parties, PartyDims{2, 2})};
        const ChoiOperator j = choi_of_kraus(unnormalized_noisy(layout));
        bool exact = true;
        for (std::size_t r = 0; r < j.matrix.rows(); ++r)
            for (std::size_t c = 0; c < j.matrix.cols(); ++c)
                exact = exact && j.matrix.at(r, c) == cplx(r == c ? 1.0 : 0.0, 0.0);
        out.require(exact, "noisy Choi not bit-exact identity at m=" + std::to_string(parties));
    }

    RandomSource rng(901);
    const std::vector<SystemLayout> pool = {SystemLayout{{{2, 2}}}, SystemLayout{{{3, 2}}},
                                            SystemLayout{{{2, 3}}}, kQubits,
                                            SystemLayout{{{2, 3}, {3, 2}}}};
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const SystemLayout& layout = pool[rng.index(pool.size())];
        std::size_t rank = 1 + rng.index(3);
        while (layout.dout_total() * rank < layout.din_total()) ++rank;
        const ChoiOperator j = choi_of_kraus(random_cptp(layout, rank, rng));
        worst = std::max(worst,
                         std::abs(trace_norm(j.matrix) - double(layout.din_total())));
    }
    out.require(worst <= 1e-8, "trace norm deviation " + fmt(worst));
}

void criterion_split_bound(Outcome& out) {
    RandomSource rng(902);
    const double bound_factor = 26.0; // 2^{m-1} sqrt(169) for two qubit parties
    double worst_reassembly = 0, worst_ratio = 0;
    for (int i = 0; i < 100; ++i) {
        ComplexMatrix x = random_tensor_q(kQubits, rng) * (0.5 + rng.uniform());
        const SeparableSplit split = sep_generate(x, kQubits, CertSpace::q_subspace);
        const CertificateReport plus = verify_certificate(split.plus);
        const CertificateReport minus = verify_certificate(split.minus);
        out.require(plus.pass && minus.pass, "certificate failed at instance " + std::to_string(i));
        worst_reassembly = std::max({worst_reassembly, plus.reassembly_residual,
                                     minus.reassembly_residual});
        const double xf = fro_norm(x);
        const ComplexMatrix back =
            split.plus.reassemble() - split.minus.reassemble() - to_grouped(x, kQubits);
        out.require(fro_norm(back) <= 1e-8 * std::max(1.0, xf),
                    "plus-minus does not reassemble X at instance " + std::to_string(i));
        const double norm = std::max(op_norm(split.plus.reassemble()),
                                     op_norm(split.minus.reassemble()));
        worst_ratio = std::max(worst_ratio, norm / xf);
    }
    out.require(worst_reassembly <= 1e-8, "worst reassembly " + fmt(worst_reassembly));
    out.require(worst_ratio <= bound_factor + 1e-9,
                "operator-norm ratio " + fmt(worst_ratio) + " exceeds 26");
}

void criterion_identity_certificates(Outcome& out) {
    RandomSource rng(903);
    const std::size_t n = space_dimension(kQubits, CertSpace::q_subspace);
    const auto check_reduction = [&](const SeparableCertificate& cert, const std::string& tag) {
        const SeparableCertificate reduced = caratheodory_reduce(cert);
        out.require(reduced.terms.size() <= n + 1,
                    tag + ": " + std::to_string(reduced.terms.size()) + " terms after reduction");
        const double diff = fro_norm(reduced.reassemble() - cert.reassemble());
        out.require(diff <= 1e-9 * std::max(1.0, fro_norm(cert.target)),
                    tag + ": reduction changed the sum by " + fmt(diff));
        out.require(verify_certificate(reduced).pass, tag + ": reduced certificate fails");
    };

    for (int i = 0; i < 50; ++i) {
        // Scaled single-party channel Chois are PSD members of the marginal
        // subspaces: admissible product factors.
        std::vector<ComplexMatrix> factors;
        for (const auto& dims : kQubits.parties)
            factors.push_back(choi_of_kraus(random_party_channel(dims, rng)).matrix *
                              (0.2 + rng.uniform()));
        const SeparableCertificate cert = identity_minus_product(factors, kQubits,
                                                                 CertSpace::q_subspace);
        out.require(verify_certificate(cert).pass, "product certificate fails at " + std::to_string(i));
        if (i < 10) check_reduction(cert, "product reduction " + std::to_string(i));
    }

    for (int i = 0; i < 50; ++i) {
        SeparableCertificate sep;
        sep.space = CertSpace::q_subspace;
        sep.layout = kQubits;
        for (int t = 0; t < 3; ++t) {
            CertTerm term;
            term.weight = 0.1 + rng.uniform();
            for (const auto& dims : kQubits.parties)
                term.factors.push_back(choi_of_kraus(random_party_channel(dims, rng)).matrix);
            sep.terms.push_back(term);
        }
        sep.target = sep.reassemble();
        const SeparableCertificate cert = identity_minus_separable(sep);
        out.require(verify_certificate(cert).pass,
                    "separable-input certificate fails at " + std::to_string(i));
        if (i < 10) check_reduction(cert, "separable reduction " + std::to_string(i));
    }

    for (int i = 0; i < 50; ++i) {
        const ComplexMatrix x = random_tensor_q(kQubits, rng);
        const SeparableCertificate cert = identity_minus_any(x, kQubits, CertSpace::q_subspace);
        out.require(verify_certificate(cert).pass,
                    "subspace-input certificate fails at " + std::to_string(i));
        if (i < 10) check_reduction(cert, "subspace reduction " + std::to_string(i));
    }
}

void criterion_ball(Outcome& out) {
    const BallParameters p = ball_parameters(kQubits);
    out.require(p.n == 169, "n = " + std::to_string(p.n));
    out.require(p.k == 4420.0, "k = " + fmt(p.k));
    out.require(p.radius_unnormalized == 1.0 / 4420.0, "radius " + fmt(p.radius_unnormalized));
    out.require(p.radius_normalized == 1.0 / 17680.0,
                "normalized radius " + fmt(p.radius_normalized));

    RandomSource rng(904);
    const ComplexMatrix eye = ComplexMatrix::identity(kQubits.choi_dim());
    for (int i = 0; i < 50; ++i) {
        // Only directions tangent to the trace-preserving slice keep I - A
        // proportional to a channel Choi: remove the identity component.
        ComplexMatrix a = random_tensor_q(kQubits, rng);
        cplx tr = 0;
        for (std::size_t d = 0; d < a.rows(); ++d) tr += a.at(d, d);
        a = a - eye * (tr / double(a.rows()));
        a = a * ((1.0 / p.k) / fro_norm(a));
        const SeparableCertificate cert = ball_certificate(a, kQubits);
        out.require(verify_certificate(cert).pass, "ball certificate fails at " + std::to_string(i));

        const LosrForm form = certificate_to_losr(cert);
        double prob = 0;
        bool channels_ok = true;
        for (const auto& term : form.terms) {
            prob += term.prob;
            for (const auto& ch : term.channels)
                channels_ok = channels_ok && check_cptp(choi_of_kraus(ch)).cptp();
        }
        out.require(std::abs(prob - 1.0) <= 1e-8, "mixture weights sum to " + fmt(prob));
        out.require(channels_ok, "non-CPTP mixture channel at " + std::to_string(i));

        const ChoiOperator mix = form.mixture_choi();
        const double gap = fro_norm(mix.matrix - (eye - a) * 0.25);
        out.require(gap <= 1e-8, "mixture misses (I-A)/4 by " + fmt(gap));
        out.require(check_constraints(mix).pass, "mixture signals at " + std::to_string(i));
        out.require(in_tensor_Q(mix.matrix, kQubits).member,
                    "mixture leaves the marginal subspace at " + std::to_string(i));
    }
}

void criterion_realization(Outcome& out) {
    RandomSource rng(905);
    const std::vector<SystemLayout> pool = {kQubits, SystemLayout{{{2, 3}, {3, 2}}},
                                            SystemLayout{{{2, 2}, {2, 2}, {2, 2}}}};
    for (int i = 0; i < 20; ++i) {
        const SystemLayout& layout = pool[rng.index(pool.size())];
        LosrForm form;
        form.layout = layout;
        form.normalization = 1.0;
        const std::size_t terms = 1 + rng.index(4);
        double total = 0;
        for (std::size_t t = 0; t < terms; ++t) {
            LosrTerm term;
            term.prob = 0.1 + rng.uniform();
            total += term.prob;
            for (const auto& dims : layout.parties)
                term.channels.push_back(random_party_channel(dims, rng));
            form.terms.push_back(term);
        }
        for (auto& term : form.terms) term.prob /= total;

        const LosrRealization realization = realize_shared_randomness(form);
        const double gap =
            fro_norm(realization_choi(realization).matrix - form.mixture_choi().matrix);
        out.require(gap <= 1e-8, "round-trip gap " + fmt(gap) + " at " + std::to_string(i));
    }
}

void criterion_environment_identities(Outcome& out) {
    RandomSource rng(906);
    double worst_restrict = 0, worst_pairing = 0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t d_x = 2 + rng.index(2);
        const std::size_t d_e = 2 + rng.index(2);
        const std::size_t d_a = 2 + rng.index(2);
        std::size_t rank = 1 + rng.index(3);
        const SystemLayout psi_layout{{{d_x * d_e, d_a}}};
        while (psi_layout.dout_total() * rank < psi_layout.din_total()) ++rank;
        const KrausChannel psi = random_cptp(psi_layout, rank, rng);
        const ChoiOperator j_psi = choi_of_kraus(psi);
        ComplexMatrix z = rng.hermitian(d_e);
        z = z * (1.0 / fro_norm(z));

        // Restriction identity versus feeding matrix units through the map.
        const ComplexMatrix got = restrict_by_state(j_psi.matrix, d_a, d_x, d_e, z);
        ComplexMatrix want(d_a * d_x, d_a * d_x);
        for (std::size_t r = 0; r < d_x; ++r)
            for (std::size_t c = 0; c < d_x; ++c) {
                const ComplexMatrix image = apply_kraus(psi, kron(basis_unit(d_x, r, c), z));
                for (std::size_t a = 0; a < d_a; ++a)
                    for (std::size_t b = 0; b < d_a; ++b)
                        want.at(a * d_x + r, b * d_x + c) = image.at(a, b);
            }
        worst_restrict = std::max(worst_restrict, fro_norm(got - want));
    }
    out.require(worst_restrict <= 1e-9, "restriction residual " + fmt(worst_restrict));

    for (int i = 0; i < 100; ++i) {
        const std::size_t d_x = 2 + rng.index(2);
        const std::size_t d_e = 2 + rng.index(2);
        const std::size_t d_a = 2 + rng.index(2);
        std::size_t rank = 1 + rng.index(3);
        const SystemLayout psi_layout{{{d_x * d_e, d_a}}};
        while (psi_layout.dout_total() * rank < psi_layout.din_total()) ++rank;
        const ChoiOperator j_psi = choi_of_kraus(random_cptp(psi_layout, rank, rng));
        ComplexMatrix z = rng.hermitian(d_e);
        z = z * (1.0 / fro_norm(z));
        ComplexMatrix h = rng.hermitian(d_a * d_x);
        h = h * (1.0 / fro_norm(h));
        worst_pairing = std::max(
            worst_pairing, functional_pairing_check(h, j_psi.matrix, d_a, d_x, d_e, z).residual());
    }
    out.require(worst_pairing <= 1e-9, "pairing residual " + fmt(worst_pairing));
}

void criterion_no_signaling(Outcome& out) {
    RandomSource rng(907);
    const std::vector<SystemLayout> pool = {kQubits, SystemLayout{{{2, 3}, {3, 2}}},
                                            SystemLayout{{{3, 2}, {2, 2}}}};
    std::vector<std::pair<std::string, ChoiOperator>> corpus;

    for (int i = 0; i < 45; ++i) {
        const SystemLayout& layout = pool[rng.index(pool.size())];
        std::size_t rank = 1 + rng.index(3);
        while (layout.dout_total() * rank < layout.din_total()) ++rank;
        corpus.emplace_back("random", choi_of_kraus(random_cptp(layout, rank, rng)));
    }
    for (int i = 0; i < 37; ++i)
        corpus.emplace_back("losr", random_losr_mixture(pool[rng.index(pool.size())], rng, 3));
    for (int i = 0; i < 8; ++i)
        corpus.emplace_back("losr", random_losr_mixture(
                                        SystemLayout{{{2, 2}, {2, 2}, {2, 2}}}, rng, 2));
    corpus.emplace_back("pr", choi_of_kraus(pr_box()));
    corpus.emplace_back("swap", choi_of_kraus(swap_channel()));
    corpus.emplace_back("losr", choi_of_kraus(completely_noisy(kQubits)));
    corpus.emplace_back("losr", choi_of_kraus(completely_noisy(SystemLayout{{{2, 3}, {3, 2}}})));
    for (int i = 0; i < 6; ++i) {
        const SystemLayout& layout = pool[rng.index(pool.size())];
        std::size_t rank = 1 + rng.index(2);
        while (layout.dout_total() * rank < layout.din_total()) ++rank;
        corpus.emplace_back("random", choi_of_kraus(random_cptp(layout, rank, rng)));
    }
    out.require(corpus.size() == 100, "corpus size " + std::to_string(corpus.size()));

    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& [tag, j] = corpus[i];
        const NoSignalReport constraints = check_constraints(j);
        const NoSignalReport semantic = check_semantic(j, 3, 1234 + i);
        out.require(constraints.pass == semantic.pass,
                    "checks disagree on corpus item " + std::to_string(i) + " (" + tag + ")");
        if (tag == "losr")
            out.require(constraints.pass && semantic.pass,
                        "mixture flagged as signaling at " + std::to_string(i));
        if (tag == "pr") {
            out.require(constraints.pass, "box flagged as signaling");
            out.require(constraints.worst <= 1e-10, "box residual " + fmt(constraints.worst));
        }
        if (tag == "swap")
            out.require(!constraints.pass && !semantic.pass, "swap passed a check");
    }
}

void criterion_box_game_witness(Outcome& out) {
    const SeparableCertificate cert = pr_box_separable_certificate();
    out.require(cert.terms.size() == 8, std::to_string(cert.terms.size()) + " certificate terms");
    const CertificateReport rep = verify_certificate(cert, 1e-12, 1e-12);
    out.require(rep.pass && rep.reassembly_residual <= 1e-12,
                "certificate residual " + fmt(rep.reassembly_residual));

    const Game game = chsh_game();
    const ChoiOperator box = choi_of_kraus(pr_box());
    const double box_value = simulate(game, box);
    out.require(std::abs(box_value - 1.0) <= 1e-10, "box value " + fmt(box_value));

    const ClassicalStrategy classical = brute_force_classical(game);
    out.require(classical.value == 0.75, "classical value " + fmt(classical.value));

    StrategySearchConfig config;
    config.env_dim = 2;
    config.restarts = 20;
    config.seed = 1;
    const SeesawResult entangled = seesaw_lose(game, config);
    out.require(entangled.value >= 0.8485, "entangled search reached " + fmt(entangled.value));
    out.require(entangled.value <= 0.853553 + 5e-3,
                "entangled search overshot " + fmt(entangled.value));

    const ComplexMatrix h = chsh_witness();
    const AuditResult audit = audit_positivity_on_cone(h, kQubits);
    out.require(audit.min_value >= -1e-6, "audit minimum " + fmt(audit.min_value));
    const double pairing = functional_value(h, box.matrix);
    out.require(std::abs(pairing + 0.25) <= 1e-10, "box pairing " + fmt(pairing));
}

void criterion_payoff_oracle(Outcome& out) {
    RandomSource rng(909);
    const std::vector<SystemLayout> pool = {kQubits, SystemLayout{{{2, 3}, {3, 2}}},
                                            SystemLayout{{{3, 2}, {2, 2}}}};
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const SystemLayout& layout = pool[rng.index(pool.size())];
        const Game game = random_game(rng, layout, 1 + rng.index(3), 1 + rng.index(4));
        std::size_t rank = 1 + rng.index(3);
        while (layout.dout_total() * rank < layout.din_total()) ++rank;
        const ChoiOperator j = choi_of_kraus(random_cptp(layout, rank, rng));
        const double direct = hs_inner(payoff_operator(game), j.matrix).real();
        worst = std::max(worst, std::abs(direct - simulate(game, j)));
    }
    out.require(worst <= 1e-10, "worst pairing gap " + fmt(worst));
}

void criterion_weak_evaluators(Outcome& out) {
    const Game game = chsh_game();
    StrategySearchConfig config;
    config.restarts = 8;
    config.max_outer = 40;
    config.seed = 1;

    const ValidityResult yes = weak_validity(game, 0.6, 10, StrategyClass::losr, config);
    out.require(yes.verdict == InstanceVerdict::yes,
                "threshold 0.6 returned " + to_string(yes.verdict));

    const ValidityResult no = weak_validity(game, 0.9, 10, StrategyClass::losr, config);
    out.require(no.verdict == InstanceVerdict::no_evidence,
                "threshold 0.9 returned " + to_string(no.verdict));

    const ComplexMatrix eye = ComplexMatrix::identity(kQubits.choi_dim());
    const MembershipResult id_member =
        weak_membership(eye, kQubits, 10, StrategyClass::losr, config);
    out.require(id_member.verdict == InstanceVerdict::yes,
                "identity membership returned " + to_string(id_member.verdict));

    RandomSource rng(910);
    StrategySearchConfig light;
    light.restarts = 4;
    light.max_outer = 20;
    light.seed = 2;
    std::size_t decided = 0;
    for (int i = 0; i < 50; ++i) {
        const ChoiOperator mix = random_losr_mixture(kQubits, rng, 3);
        const MembershipResult res =
            weak_membership(mix.matrix, kQubits, 10, StrategyClass::losr, light);
        out.require(res.verdict != InstanceVerdict::no_evidence,
                    "unsound NO on mixture " + std::to_string(i));
        if (res.verdict == InstanceVerdict::yes) ++decided;
    }
    out.require(decided >= 25, "only " + std::to_string(decided) + "/50 mixtures recognized");
}

struct Criterion {
    int id;
    std::string label;
    double time_cap_s;
    std::function<void(Outcome&)> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "Choi calculus: exact noisy-channel identity; trace norm = input dimension", 5.0,
         criterion_choi_calculus},
        {2, "subspace elements split into two bounded separable certificates", 120.0,
         criterion_split_bound},
        {3, "identity-minus certificates verify and reduce to at most n+1 terms", 300.0,
         criterion_identity_certificates},
        {4, "ball constants exact; in-ball directions yield certified channel mixtures", 600.0,
         criterion_ball},
        {5, "shared-randomness realizations round-trip mixtures", 600.0, criterion_realization},
        {6, "environment restriction and pairing identities", 600.0,
         criterion_environment_identities},
        {7, "constraint and semantic no-signaling checks agree on a 100-channel corpus", 600.0,
         criterion_no_signaling},
        {8, "box certificate, game values, see-saw target, audited witness", 600.0,
         criterion_box_game_witness},
        {9, "payoff operator reproduces simulation on 100 random pairs", 600.0,
         criterion_payoff_oracle},
        {10, "weak validity/membership verdicts sound on worked and mixture instances", 600.0,
         criterion_weak_evaluators},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Outcome out;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(out);
        } catch (const std::exception& e) {
            out.require(false, std::string("exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.require(seconds < c.time_cap_s,
                    "took " + fmt(seconds) + " s (cap " + fmt(c.time_cap_s) + " s)");
        std::printf("[%2d] %s  %s (%.1f s)%s%s\n", c.id, out.pass ? "PASS" : "FAIL",
                    c.label.c_str(), seconds, out.detail.empty() ? "" : ": ",
                    out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failures,
                criteria.size());
    return failures;
}
