// Command-line front end.  Every subcommand reads JSON files, calls the
// library, and prints a single run report on stdout.  No numerical logic
// lives here.

#include <CLI11.hpp>
#include <json.hpp>

#include "localops/canonical.hpp"
#include "localops/choi.hpp"
#include "localops/eig.hpp"
#include "localops/errors.hpp"
#include "localops/games.hpp"
#include "localops/layout.hpp"
#include "localops/losr.hpp"
#include "localops/nosignal.hpp"
#include "localops/qspace.hpp"
#include "localops/sep.hpp"
#include "localops/serialize.hpp"
#include "localops/witness.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace localops;

// ---------------------------------------------------------------- report ---

struct RunState {
    std::string command;
    std::uint64_t digest = 1469598103934665603ULL; // FNV-1a offset basis
    json checks = json::array();
    json result = json::object();
    std::string status = "pass";
    std::string error;
    std::uint64_t seed = 1;

    void fold(const std::string& bytes) {
        for (unsigned char c : bytes) {
            digest ^= static_cast<std::uint64_t>(c);
            digest *= 1099511628211ULL;
        }
    }

    void add_check(const std::string& name, double residual, bool pass) {
        checks.push_back({{"name", name}, {"residual", residual}, {"pass", pass}});
        if (!pass && status == "pass") status = "fail";
    }

    void add_flag(const std::string& name, bool pass) {
        checks.push_back({{"name", name}, {"pass", pass}});
        if (!pass && status == "pass") status = "fail";
    }

    int exit_code() const {
        if (status == "pass") return 0;
        if (status == "fail") return 1;
        if (status == "unknown") return 4;
        return 2;
    }
};

std::string digest_hex(std::uint64_t d) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(d));
    return buf;
}

json read_json_file(RunState& st, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    st.fold(bytes);
    json j = json::parse(bytes, nullptr, false);
    if (j.is_discarded()) throw usage_error("malformed JSON in " + path);
    return j;
}

// ---------------------------------------------------------------- inputs ---

// "qubits2x2" or a comma list of "DINxDOUT" per party.
SystemLayout parse_layout_string(const std::string& text) {
    if (text == "qubits2x2") return SystemLayout{{{2, 2}, {2, 2}}};
    std::vector<PartyDims> parties;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto x = tok.find('x');
        if (x == std::string::npos || x == 0 || x + 1 == tok.size())
            throw usage_error("layout token must look like 2x2: " + tok);
        std::size_t din = 0, dout = 0;
        try {
            din = std::stoull(tok.substr(0, x));
            dout = std::stoull(tok.substr(x + 1));
        } catch (const std::exception&) {
            throw usage_error("layout token must look like 2x2: " + tok);
        }
        if (din == 0 || dout == 0) throw usage_error("layout dimensions must be positive");
        parties.push_back({din, dout});
    }
    if (parties.empty()) throw usage_error("empty layout string");
    return SystemLayout{parties};
}

struct OperatorInput {
    SystemLayout layout;
    ComplexMatrix global; // always converted to global ordering
};

// File schema: {"layout": ..., "matrix": ..., "ordering"?: "global"|"grouped"}.
// An explicit --ordering flag wins over the file's own field.  A channel
// file ({"form": "choi"|"kraus", ...}) is accepted too and contributes its
// Choi matrix, already in the global ordering.
OperatorInput load_operator(RunState& st, const std::string& path, const std::string& ordering_flag) {
    json j = read_json_file(st, path);
    if (j.is_object() && j.contains("form") && !j.contains("matrix")) {
        if (!ordering_flag.empty())
            throw usage_error("--ordering does not apply to channel files; "
                              "set the channel's own ordering field instead");
        ChoiOperator choi = choi_from_json(j);
        return OperatorInput{choi.layout, choi.matrix};
    }
    if (!j.is_object() || !j.contains("layout") || !j.contains("matrix"))
        throw usage_error("operator file needs layout and matrix fields: " + path);
    OperatorInput in{layout_from_json(j.at("layout")), matrix_from_json(j.at("matrix"))};
    std::string ordering = "global";
    if (j.contains("ordering")) {
        if (!j.at("ordering").is_string()) throw usage_error("ordering must be a string");
        ordering = j.at("ordering").get<std::string>();
    }
    if (!ordering_flag.empty()) ordering = ordering_flag;
    if (ordering == "grouped") {
        in.global = to_global(in.global, in.layout);
    } else if (ordering != "global") {
        throw usage_error("ordering must be global or grouped: " + ordering);
    }
    return in;
}

ChoiOperator load_channel(RunState& st, const std::string& path) {
    return choi_from_json(read_json_file(st, path));
}

json operator_to_json(const SystemLayout& layout, const ComplexMatrix& global) {
    return json{{"layout", layout_to_json(layout)},
                {"matrix", matrix_to_json(global)},
                {"ordering", "global"}};
}

std::string mask_name(unsigned mask, std::size_t parties) {
    std::string out = "K={";
    bool first = true;
    for (std::size_t i = 0; i < parties; ++i) {
        if (mask & (1u << i)) {
            if (!first) out += ",";
            out += std::to_string(i + 1);
            first = false;
        }
    }
    return out + "}";
}

// ------------------------------------------------------------- examples ---

const std::vector<std::string> kExampleNames = {
    "noisy2x2", "prbox", "prbox-choi", "prbox-cert", "swap",
    "chsh", "chsh-witness", "chsh-payoff"};

json emit_example(const std::string& name) {
    if (name == "noisy2x2") return channel_to_json(completely_noisy(parse_layout_string("qubits2x2")));
    if (name == "prbox") return channel_to_json(pr_box());
    if (name == "prbox-choi") return channel_to_json(choi_of_kraus(pr_box()));
    if (name == "prbox-cert") return certificate_to_json(pr_box_separable_certificate());
    if (name == "swap") return channel_to_json(swap_channel());
    if (name == "chsh") return game_to_json(chsh_game());
    if (name == "chsh-witness") return operator_to_json(parse_layout_string("qubits2x2"), chsh_witness());
    if (name == "chsh-payoff") return operator_to_json(parse_layout_string("qubits2x2"), payoff_operator(chsh_game()));
    throw usage_error("unknown example: " + name);
}

// --------------------------------------------------------------- actions ---

void run_verify_cptp(RunState& st, const std::string& file, double tol) {
    const ChoiOperator j = load_channel(st, file);
    const double psd_tol = tol > 0 ? tol : 1e-9;
    const double tp_tol = tol > 0 ? tol : 1e-8;
    const CptpReport rep = check_cptp(j, psd_tol, tp_tol);
    st.add_check("psd_min_eigenvalue", -rep.min_eig, rep.cp);
    st.add_check("trace_preserving", rep.tp_residual, rep.tp);
    st.result = {{"min_eigenvalue", rep.min_eig},
                 {"tp_residual", rep.tp_residual},
                 {"cptp", rep.cptp()}};
}

void run_verify_nosig(RunState& st, const std::string& file, double tol, bool semantic,
                      std::size_t trials) {
    const ChoiOperator j = load_channel(st, file);
    const std::size_t m = j.layout.parties.size();
    if (m > 5) throw usage_error("nosig: at most five parties at the command line");
    const double use_tol = tol > 0 ? tol : 1e-8;
    const NoSignalReport rep = check_constraints(j, use_tol);
    for (const auto& e : rep.entries)
        st.add_check("constraint " + mask_name(e.k_mask, m), e.residual, e.pass);
    st.result = {{"pass", rep.pass}, {"max_residual", rep.worst}};
    if (semantic) {
        const NoSignalReport sem = check_semantic(j, trials, st.seed, use_tol);
        for (const auto& e : sem.entries)
            st.add_check("semantic " + mask_name(e.k_mask, m), e.residual, e.pass);
        st.result["semantic_pass"] = sem.pass;
        st.result["semantic_max_residual"] = sem.worst;
    }
}

void run_verify_tensorq(RunState& st, const std::string& file, const std::string& ordering,
                        double tol) {
    const OperatorInput in = load_operator(st, file, ordering);
    const double use_tol = tol > 0 ? tol : 1e-8;
    const MembershipReport rep = in_tensor_Q(in.global, in.layout, use_tol);
    st.add_check("projection_residual", rep.projection_residual, rep.member);
    st.result = {{"member", rep.member},
                 {"borderline", rep.borderline},
                 {"projection_residual", rep.projection_residual}};
}

void run_verify_cert(RunState& st, const std::string& file, double tol) {
    const SeparableCertificate cert = certificate_from_json(read_json_file(st, file));
    const double use_tol = tol > 0 ? tol : 1e-8;
    const CertificateReport rep = verify_certificate(cert, use_tol);
    st.add_check("reassembly", rep.reassembly_residual, rep.reassembly_residual <= use_tol);
    st.add_check("weights_nonnegative", -rep.min_weight, rep.min_weight >= -use_tol);
    st.add_check("factor_psd_defect", rep.worst_psd_defect, rep.worst_psd_defect <= 1e-9);
    st.add_check("factor_space_residual", rep.worst_space_residual, rep.worst_space_residual <= use_tol);
    st.result = {{"verified", rep.pass},
                 {"terms", cert.terms.size()},
                 {"reassembly_residual", rep.reassembly_residual}};
}

void run_decompose_split(RunState& st, const std::string& file, const std::string& ordering) {
    const OperatorInput in = load_operator(st, file, ordering);
    const auto [plus, minus] = split_psd(in.global);
    const double scale = std::max(1.0, fro_norm(in.global));
    const double reassembly = fro_norm(in.global - (plus - minus));
    st.add_check("reassembly", reassembly, reassembly <= 1e-10 * scale);
    st.add_check("plus_psd", -min_eigenvalue(plus), min_eigenvalue(plus) >= -1e-9 * scale);
    st.add_check("minus_psd", -min_eigenvalue(minus), min_eigenvalue(minus) >= -1e-9 * scale);
    st.result = {{"plus", matrix_to_json(plus)},
                 {"minus", matrix_to_json(minus)},
                 {"plus_norm", fro_norm(plus)},
                 {"minus_norm", fro_norm(minus)}};
}

void run_decompose_sep(RunState& st, const std::string& file, const std::string& ordering,
                       const std::string& space_name, double tol) {
    const OperatorInput in = load_operator(st, file, ordering);
    const CertSpace space = space_name == "hermitian" ? CertSpace::hermitian : CertSpace::q_subspace;
    const double use_tol = tol > 0 ? tol : 1e-8;
    const SeparableSplit split = sep_generate(in.global, in.layout, space, use_tol);
    const CertificateReport plus_rep = verify_certificate(split.plus, use_tol);
    const CertificateReport minus_rep = verify_certificate(split.minus, use_tol);
    st.add_check("plus_verifies", plus_rep.reassembly_residual, plus_rep.pass);
    st.add_check("minus_verifies", minus_rep.reassembly_residual, minus_rep.pass);
    st.add_check("operator_norm_bound", std::max(split.plus_norm, split.minus_norm) - split.norm_bound,
                 std::max(split.plus_norm, split.minus_norm) <= split.norm_bound + 1e-9);
    st.result = {{"plus", certificate_to_json(split.plus)},
                 {"minus", certificate_to_json(split.minus)},
                 {"norm_bound", split.norm_bound},
                 {"plus_norm", split.plus_norm},
                 {"minus_norm", split.minus_norm}};
}

void run_decompose_id_minus(RunState& st, const std::string& file, const std::string& ordering,
                            const std::string& space_name, double tol) {
    const OperatorInput in = load_operator(st, file, ordering);
    const CertSpace space = space_name == "hermitian" ? CertSpace::hermitian : CertSpace::q_subspace;
    const double use_tol = tol > 0 ? tol : 1e-8;
    const SeparableCertificate cert = identity_minus_any(in.global, in.layout, space, use_tol);
    const CertificateReport rep = verify_certificate(cert, use_tol);
    st.add_check("reassembly", rep.reassembly_residual, rep.pass);
    st.result = {{"certificate", certificate_to_json(cert)}, {"terms", cert.terms.size()}};
}

void run_ball_radius(RunState& st, const std::string& layout_text) {
    const SystemLayout layout = parse_layout_string(layout_text);
    const BallParameters p = ball_parameters(layout);
    st.result = {{"q_dims", p.q_dims},
                 {"n", p.n},
                 {"k", p.k},
                 {"radius_unnormalized", p.radius_unnormalized},
                 {"radius_normalized", p.radius_normalized}};
}

void run_ball_cert(RunState& st, const std::string& file, const std::string& ordering, double tol) {
    const OperatorInput in = load_operator(st, file, ordering);
    const double use_tol = tol > 0 ? tol : 1e-8;
    const SeparableCertificate cert = ball_certificate(in.global, in.layout, use_tol);
    const CertificateReport rep = verify_certificate(cert, use_tol);
    st.add_check("reassembly", rep.reassembly_residual, rep.pass);
    st.result = {{"certificate", certificate_to_json(cert)}, {"terms", cert.terms.size()}};
}

void run_ball_losr(RunState& st, const std::string& file, double tol) {
    const SeparableCertificate cert = certificate_from_json(read_json_file(st, file));
    const double use_tol = tol > 0 ? tol : 1e-8;
    const LosrForm form = certificate_to_losr(cert, use_tol);
    double prob_sum = 0;
    for (const auto& t : form.terms) prob_sum += t.prob;
    st.add_check("probabilities_sum_to_one", std::abs(prob_sum - 1.0), std::abs(prob_sum - 1.0) <= 1e-8);
    const ChoiOperator mix = form.mixture_choi();
    const ComplexMatrix target = to_global(cert.target, cert.layout);
    const double scale = std::max(1.0, fro_norm(target));
    const double mix_residual = fro_norm(mix.matrix * form.normalization - target);
    st.add_check("mixture_matches_target", mix_residual, mix_residual <= use_tol * scale);
    const NoSignalReport nosig = check_constraints(mix, 1e-8);
    st.add_flag("mixture_no_signaling", nosig.pass);
    st.result = {{"losr", losr_to_json(form)}, {"terms", form.terms.size()}};
}

void run_ball_realize(RunState& st, const std::string& file) {
    const LosrForm form = losr_from_json(read_json_file(st, file));
    const LosrRealization realization = realize_shared_randomness(form);
    const ChoiOperator direct = form.mixture_choi();
    const ChoiOperator realized = realization_choi(realization);
    const double scale = std::max(1.0, fro_norm(direct.matrix));
    const double residual = fro_norm(direct.matrix - realized.matrix);
    st.add_check("realization_matches_mixture", residual, residual <= 1e-8 * scale);
    st.result = {{"env_dim", realization.env_dim},
                 {"sigma_diag", realization.sigma_diag},
                 {"local_channels", realization.local_ops.size()}};
}

void run_game_simulate(RunState& st, const std::string& game_file, const std::string& channel_file) {
    const Game game = game_from_json(read_json_file(st, game_file));
    const ChoiOperator j = load_channel(st, channel_file);
    const double value = simulate(game, j);
    st.result = {{"value", value}};
}

void run_game_value(RunState& st, const std::string& game_file, const std::string& channel_file) {
    const Game game = game_from_json(read_json_file(st, game_file));
    const ChoiOperator j = load_channel(st, channel_file);
    const ComplexMatrix r = payoff_operator(game);
    const double direct = hs_inner(r, j.matrix).real();
    const double simulated = simulate(game, j);
    st.add_check("payoff_matches_simulation", std::abs(direct - simulated),
                 std::abs(direct - simulated) <= 1e-10 * std::max(1.0, std::abs(direct)));
    st.result = {{"value", direct}, {"simulated", simulated}};
}

void run_game_classical(RunState& st, const std::string& game_file) {
    const Game game = game_from_json(read_json_file(st, game_file));
    const ClassicalStrategy best = brute_force_classical(game);
    json responses = json::array();
    for (const auto& party : best.responses) responses.push_back(party);
    st.result = {{"value", best.value}, {"responses", responses}};
}

StrategySearchConfig search_config(const RunState& st, std::size_t env, std::size_t restarts,
                                   std::size_t outer) {
    StrategySearchConfig cfg;
    cfg.env_dim = env;
    cfg.restarts = restarts;
    cfg.max_outer = outer;
    cfg.seed = st.seed;
    return cfg;
}

void run_game_seesaw(RunState& st, const std::string& game_file, const std::string& mode,
                     std::size_t env, std::size_t restarts, std::size_t outer) {
    const Game game = game_from_json(read_json_file(st, game_file));
    StrategySearchConfig cfg = search_config(st, mode == "losr" ? 1 : env, restarts, outer);
    const SeesawResult res = seesaw_lose(game, cfg);
    st.result = {{"value", res.value},
                 {"converged", res.converged},
                 {"best_restart", res.best_restart},
                 {"channel", channel_to_json(res.channel)}};
}

void run_game_weak_validity(RunState& st, const std::string& game_file, double gamma,
                            std::size_t s, const std::string& mode, std::size_t env,
                            std::size_t restarts, std::size_t outer) {
    const Game game = game_from_json(read_json_file(st, game_file));
    const StrategyClass cls = mode == "losr" ? StrategyClass::losr : StrategyClass::lose;
    StrategySearchConfig cfg = search_config(st, env, restarts, outer);
    const ValidityResult res = weak_validity(game, gamma, s, cls, cfg);
    if (res.verdict == InstanceVerdict::unknown) st.status = "unknown";
    if (res.verdict == InstanceVerdict::no_evidence) st.status = "fail";
    st.result = {{"verdict", to_string(res.verdict)},
                 {"epsilon", res.epsilon},
                 {"lower_bound", res.lower_bound},
                 {"upper_bound", res.upper_bound},
                 {"note", res.note}};
}

void run_game_weak_membership(RunState& st, const std::string& file, const std::string& ordering,
                              std::size_t s, const std::string& mode, std::size_t restarts,
                              std::size_t outer) {
    const OperatorInput in = load_operator(st, file, ordering);
    const StrategyClass cls = mode == "lose" ? StrategyClass::lose : StrategyClass::losr;
    StrategySearchConfig cfg = search_config(st, 1, restarts, outer);
    const MembershipResult res = weak_membership(in.global, in.layout, s, cls, cfg);
    if (res.verdict == InstanceVerdict::unknown) st.status = "unknown";
    if (res.verdict == InstanceVerdict::no_evidence) st.status = "fail";
    st.result = {{"verdict", to_string(res.verdict)},
                 {"epsilon", res.epsilon},
                 {"fit_residual", res.fit_residual},
                 {"witness_value", res.witness_value},
                 {"witness_margin", res.witness_margin},
                 {"note", res.note}};
}

void run_witness_eval(RunState& st, const std::string& witness_file, const std::string& channel_file,
                      const std::string& ordering) {
    const OperatorInput h = load_operator(st, witness_file, ordering);
    const ChoiOperator j = load_channel(st, channel_file);
    const double value = functional_value(h.global, j.matrix);
    st.result = {{"value", value}};
}

void run_witness_audit(RunState& st, const std::string& witness_file, const std::string& ordering,
                       std::size_t restarts) {
    const OperatorInput h = load_operator(st, witness_file, ordering);
    AuditConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = st.seed;
    const AuditResult audit = audit_positivity_on_cone(h.global, h.layout, cfg);
    st.result = {{"min_value", audit.min_value}, {"nonnegative", audit.nonnegative()}};
}

void run_witness_certify(RunState& st, const std::string& witness_file, const std::string& channel_file,
                         const std::string& ordering, std::size_t restarts) {
    const OperatorInput h = load_operator(st, witness_file, ordering);
    const ChoiOperator j = load_channel(st, channel_file);
    AuditConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = st.seed;
    const Witness w = certify_non_losr(h.global, j, cfg);
    st.add_check("audit_nonnegative_on_cone", -w.audit.min_value, w.audit.nonnegative());
    st.add_check("value_negative", w.value, w.certifies);
    st.result = witness_to_json(w);
    if (!w.certifies) st.status = "fail";
}

void run_examples_list(RunState& st) {
    st.result = {{"names", kExampleNames}};
}

void run_examples_emit(RunState& st, const std::string& name, const std::string& out_path) {
    const json payload = emit_example(name);
    if (!out_path.empty()) save_json_file(out_path, payload);
    st.result = {{"name", name}, {"payload", payload}};
}

} // namespace

int main(int argc, char** argv) {
    const auto start = std::chrono::steady_clock::now();
    RunState st;
    {
        std::ostringstream cmd;
        for (int i = 0; i < argc; ++i) cmd << (i ? " " : "") << argv[i];
        st.command = cmd.str();
    }

    CLI::App app{"numerical toolkit for separable decompositions, shared-randomness balls, "
                 "no-signaling checks, and one-round games"};
    app.require_subcommand(1);

    std::string file, second_file, layout_text = "qubits2x2", ordering, space_name = "Q";
    std::string mode = "lose", example_name, out_path;
    double tol = -1.0, gamma = 0.0;
    std::size_t s = 10, env = 2, restarts = 20, outer = 60, trials = 4;
    bool semantic = false;

    const auto add_seed = [&](CLI::App* cmd) { cmd->add_option("--seed", st.seed, "RNG seed"); };
    const auto add_tol = [&](CLI::App* cmd) { cmd->add_option("--tol", tol, "override check tolerance"); };
    const auto add_ordering = [&](CLI::App* cmd) {
        cmd->add_option("--ordering", ordering, "matrix ordering: global or grouped")
            ->check(CLI::IsMember({"global", "grouped"}));
    };

    // verify -----------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "check structural properties of operators");
    verify->require_subcommand(1);

    auto* v_cptp = verify->add_subcommand("cptp", "complete positivity and trace preservation");
    v_cptp->add_option("file", file, "channel JSON")->required();
    add_tol(v_cptp);
    v_cptp->callback([&] { run_verify_cptp(st, file, tol); });

    auto* v_nosig = verify->add_subcommand("nosig", "no-signaling marginal constraints");
    v_nosig->add_option("file", file, "channel JSON")->required();
    v_nosig->add_flag("--semantic", semantic, "also cross-check on random inputs");
    v_nosig->add_option("--trials", trials, "random inputs per semantic check");
    add_tol(v_nosig);
    add_seed(v_nosig);
    v_nosig->callback([&] { run_verify_nosig(st, file, tol, semantic, trials); });

    auto* v_tensorq = verify->add_subcommand("tensorq", "membership in the tensor marginal subspace");
    v_tensorq->add_option("file", file, "operator JSON")->required();
    add_ordering(v_tensorq);
    add_tol(v_tensorq);
    v_tensorq->callback([&] { run_verify_tensorq(st, file, ordering, tol); });

    auto* v_cert = verify->add_subcommand("cert", "separable-certificate reassembly");
    v_cert->add_option("file", file, "certificate JSON")->required();
    add_tol(v_cert);
    v_cert->callback([&] { run_verify_cert(st, file, tol); });

    // decompose --------------------------------------------------------------
    auto* decompose = app.add_subcommand("decompose", "build separable decompositions");
    decompose->require_subcommand(1);

    auto* d_split = decompose->add_subcommand("split", "positive/negative spectral split");
    d_split->add_option("file", file, "operator JSON")->required();
    add_ordering(d_split);
    d_split->callback([&] { run_decompose_split(st, file, ordering); });

    auto* d_sep = decompose->add_subcommand("sep", "two separable certificates with a norm bound");
    d_sep->add_option("file", file, "operator JSON")->required();
    d_sep->add_option("--space", space_name, "factor space: Q or hermitian")
        ->check(CLI::IsMember({"Q", "hermitian"}));
    add_ordering(d_sep);
    add_tol(d_sep);
    d_sep->callback([&] { run_decompose_sep(st, file, ordering, space_name, tol); });

    auto* d_idm = decompose->add_subcommand("id-minus", "certificate for identity minus the input");
    d_idm->add_option("file", file, "operator JSON")->required();
    d_idm->add_option("--space", space_name, "factor space: Q or hermitian")
        ->check(CLI::IsMember({"Q", "hermitian"}));
    add_ordering(d_idm);
    add_tol(d_idm);
    d_idm->callback([&] { run_decompose_id_minus(st, file, ordering, space_name, tol); });

    // ball -------------------------------------------------------------------
    auto* ball = app.add_subcommand("ball", "shared-randomness ball around the noisy channel");
    ball->require_subcommand(1);

    auto* b_radius = ball->add_subcommand("radius", "ball constants for a layout");
    b_radius->add_option("--layout", layout_text, "qubits2x2 or comma list of DINxDOUT");
    b_radius->callback([&] { run_ball_radius(st, layout_text); });

    auto* b_cert = ball->add_subcommand("cert", "separable certificate for identity minus input");
    b_cert->add_option("file", file, "operator JSON (direction A, global ordering)")->required();
    add_ordering(b_cert);
    add_tol(b_cert);
    b_cert->callback([&] { run_ball_cert(st, file, ordering, tol); });

    auto* b_losr = ball->add_subcommand("losr", "turn a certificate into a channel mixture");
    b_losr->add_option("file", file, "certificate JSON")->required();
    add_tol(b_losr);
    b_losr->callback([&] { run_ball_losr(st, file, tol); });

    auto* b_realize = ball->add_subcommand("realize", "explicit shared-randomness realization");
    b_realize->add_option("file", file, "mixture JSON")->required();
    b_realize->callback([&] { run_ball_realize(st, file); });

    // game -------------------------------------------------------------------
    auto* game = app.add_subcommand("game", "one-round two-party referee games");
    game->require_subcommand(1);

    auto* g_sim = game->add_subcommand("simulate", "winning probability of a channel");
    g_sim->add_option("--game", file, "game JSON")->required();
    g_sim->add_option("--channel", second_file, "channel JSON")->required();
    g_sim->callback([&] { run_game_simulate(st, file, second_file); });

    auto* g_val = game->add_subcommand("value", "payoff-operator pairing with cross-check");
    g_val->add_option("--game", file, "game JSON")->required();
    g_val->add_option("--channel", second_file, "channel JSON")->required();
    g_val->callback([&] { run_game_value(st, file, second_file); });

    auto* g_cls = game->add_subcommand("classical", "exhaustive deterministic optimum");
    g_cls->add_option("--game", file, "game JSON")->required();
    g_cls->callback([&] { run_game_classical(st, file); });

    auto* g_ss = game->add_subcommand("seesaw", "alternating local-strategy search");
    g_ss->add_option("--game", file, "game JSON")->required();
    g_ss->add_option("--mode", mode, "strategy class: lose or losr")
        ->check(CLI::IsMember({"lose", "losr"}));
    g_ss->add_option("--env", env, "entangled environment dimension");
    g_ss->add_option("--restarts", restarts, "random restarts");
    g_ss->add_option("--outer", outer, "outer iterations per restart");
    add_seed(g_ss);
    g_ss->callback([&] { run_game_seesaw(st, file, mode, env, restarts, outer); });

    auto* g_wv = game->add_subcommand("weak-validity", "threshold decision with 1/s gap");
    g_wv->add_option("--game", file, "game JSON")->required();
    g_wv->add_option("--gamma", gamma, "threshold")->required();
    g_wv->add_option("--s", s, "gap parameter (epsilon = 1/s)")->required();
    g_wv->add_option("--mode", mode, "strategy class: lose or losr")
        ->check(CLI::IsMember({"lose", "losr"}));
    g_wv->add_option("--env", env, "entangled environment dimension");
    g_wv->add_option("--restarts", restarts, "random restarts");
    g_wv->add_option("--outer", outer, "outer iterations per restart");
    add_seed(g_wv);
    g_wv->callback([&] { run_game_weak_validity(st, file, gamma, s, mode, env, restarts, outer); });

    auto* g_wm = game->add_subcommand("weak-membership", "distance decision for the strategy set");
    g_wm->add_option("file", file, "operator JSON")->required();
    g_wm->add_option("--s", s, "gap parameter (epsilon = 1/s)")->required();
    g_wm->add_option("--mode", mode, "strategy class: losr or lose")
        ->check(CLI::IsMember({"lose", "losr"}));
    g_wm->add_option("--restarts", restarts, "random restarts");
    g_wm->add_option("--outer", outer, "outer iterations per restart");
    add_ordering(g_wm);
    add_seed(g_wm);
    g_wm->callback([&] {
        if (mode == "lose" || !g_wm->get_option("--mode")->count()) mode = "losr";
        run_game_weak_membership(st, file, ordering, s, mode, restarts, outer);
    });

    // witness ----------------------------------------------------------------
    auto* witness = app.add_subcommand("witness", "linear functionals separating strategies");
    witness->require_subcommand(1);

    auto* w_eval = witness->add_subcommand("eval", "pair a functional with a channel");
    w_eval->add_option("--witness", file, "operator JSON")->required();
    w_eval->add_option("--channel", second_file, "channel JSON")->required();
    add_ordering(w_eval);
    w_eval->callback([&] { run_witness_eval(st, file, second_file, ordering); });

    auto* w_audit = witness->add_subcommand("audit", "minimum over product strategies");
    w_audit->add_option("--witness", file, "operator JSON")->required();
    w_audit->add_option("--restarts", restarts, "random restarts");
    add_ordering(w_audit);
    add_seed(w_audit);
    w_audit->callback([&] { run_witness_audit(st, file, ordering, restarts); });

    auto* w_cert = witness->add_subcommand("certify", "audited separation certificate");
    w_cert->add_option("--witness", file, "operator JSON")->required();
    w_cert->add_option("--channel", second_file, "channel JSON")->required();
    w_cert->add_option("--restarts", restarts, "random restarts");
    add_ordering(w_cert);
    add_seed(w_cert);
    w_cert->callback([&] { run_witness_certify(st, file, second_file, ordering, restarts); });

    // examples ---------------------------------------------------------------
    auto* examples = app.add_subcommand("examples", "bundled reference objects");
    examples->require_subcommand(1);

    auto* e_list = examples->add_subcommand("list", "names of bundled objects");
    e_list->callback([&] { run_examples_list(st); });

    auto* e_emit = examples->add_subcommand("emit", "print or save a bundled object");
    e_emit->add_option("name", example_name, "object name")->required();
    e_emit->add_option("--out", out_path, "also write the object to this file");
    e_emit->callback([&] { run_examples_emit(st, example_name, out_path); });

    int code = 0;
    try {
        app.parse(argc, argv);
        code = st.exit_code();
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        std::cerr << e.what() << "\n";
        st.status = "error";
        st.error = e.what();
        code = 2;
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        st.status = "error";
        st.error = e.what();
        code = 2;
    } catch (const contract_error& e) {
        std::cerr << "contract violated: " << e.what() << "\n";
        st.status = "fail";
        st.error = e.what();
        code = 1;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        st.status = "error";
        st.error = e.what();
        code = 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        st.status = "error";
        st.error = e.what();
        code = 2;
    }

    const auto elapsed = std::chrono::steady_clock::now() - start;
    json report{{"command", st.command},
                {"inputs_digest", digest_hex(st.digest)},
                {"checks", st.checks},
                {"status", st.status},
                {"wall_time_ms",
                 std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count()},
                {"seed", st.seed},
                {"result", st.result}};
    if (!st.error.empty()) report["error"] = st.error;
    std::cout << report.dump(2) << "\n";
    return code;
}
