#include "localops/serialize.hpp"

#include <fstream>

#include "localops/errors.hpp"

namespace localops {

namespace {

const json& field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw usage_error(std::string("JSON: missing field \"") + key + "\"");
    return *it;
}

std::size_t size_field(const json& j, const char* key) {
    const json& f = field(j, key);
    if (!f.is_number_unsigned()) throw usage_error(std::string("JSON: \"") + key + "\" must be a nonnegative integer");
    return f.get<std::size_t>();
}

double number(const json& j, const char* what) {
    if (!j.is_number()) throw usage_error(std::string("JSON: ") + what + " must be a number");
    return j.get<double>();
}

} // namespace

json matrix_to_json(const ComplexMatrix& m) {
    json data = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            data.push_back({m.at(r, c).real(), m.at(r, c).imag()});
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_object()) throw usage_error("JSON: matrix must be an object");
    const std::size_t rows = size_field(j, "rows");
    const std::size_t cols = size_field(j, "cols");
    const json& data = field(j, "data");
    if (!data.is_array() || data.size() != rows * cols)
        throw usage_error("JSON: matrix data length does not match rows*cols");
    ComplexMatrix m(rows, cols);
    for (std::size_t t = 0; t < data.size(); ++t) {
        const json& entry = data[t];
        if (!entry.is_array() || entry.size() != 2)
            throw usage_error("JSON: matrix entries must be [re, im] pairs");
        m.at(t / cols, t % cols) = cplx(number(entry[0], "matrix entry"), number(entry[1], "matrix entry"));
    }
    return m;
}

json layout_to_json(const SystemLayout& layout) {
    json parties = json::array();
    for (const PartyDims& p : layout.parties)
        parties.push_back({{"din", p.din}, {"dout", p.dout}});
    return json{{"parties", std::move(parties)}};
}

SystemLayout layout_from_json(const json& j) {
    const json& parties = field(j, "parties");
    if (!parties.is_array() || parties.empty())
        throw usage_error("JSON: layout needs a nonempty parties array");
    SystemLayout layout;
    for (const json& p : parties)
        layout.parties.push_back(PartyDims{size_field(p, "din"), size_field(p, "dout")});
    layout.validate();
    return layout;
}

json channel_to_json(const KrausChannel& ch) {
    json ops = json::array();
    for (const ComplexMatrix& k : ch.kraus) ops.push_back(matrix_to_json(k));
    return json{{"layout", layout_to_json(ch.layout)},
                {"form", "kraus"},
                {"ordering", "global"},
                {"kraus", std::move(ops)}};
}

json channel_to_json(const ChoiOperator& j) {
    return json{{"layout", layout_to_json(j.layout)},
                {"form", "choi"},
                {"ordering", "global"},
                {"choi", matrix_to_json(j.matrix)}};
}

KrausChannel kraus_from_json(const json& j) {
    if (field(j, "form").get<std::string>() != "kraus")
        throw usage_error("JSON: expected a Kraus-form channel");
    KrausChannel ch;
    ch.layout = layout_from_json(field(j, "layout"));
    for (const json& op : field(j, "kraus")) ch.kraus.push_back(matrix_from_json(op));
    ch.validate();
    return ch;
}

ChoiOperator choi_from_json(const json& j) {
    const std::string form = field(j, "form").get<std::string>();
    if (form == "kraus") return choi_of_kraus(kraus_from_json(j));
    if (form != "choi") throw usage_error("JSON: channel form must be \"kraus\" or \"choi\"");

    ChoiOperator op;
    op.layout = layout_from_json(field(j, "layout"));
    op.matrix = matrix_from_json(field(j, "choi"));
    std::string ordering = "global";
    if (j.contains("ordering")) ordering = j["ordering"].get<std::string>();
    if (ordering == "grouped")
        op.matrix = to_global(op.matrix, op.layout);
    else if (ordering != "global")
        throw usage_error("JSON: ordering must be \"global\" or \"grouped\"");
    op.validate();
    return op;
}

json certificate_to_json(const SeparableCertificate& cert) {
    json terms = json::array();
    for (const CertTerm& term : cert.terms) {
        json factors = json::array();
        for (const ComplexMatrix& f : term.factors) factors.push_back(matrix_to_json(f));
        terms.push_back({{"weight", term.weight}, {"factors", std::move(factors)}});
    }
    return json{{"space", cert.space == CertSpace::q_subspace ? "Q" : "hermitian"},
                {"layout", layout_to_json(cert.layout)},
                {"terms", std::move(terms)},
                {"target", matrix_to_json(cert.target)}};
}

SeparableCertificate certificate_from_json(const json& j) {
    SeparableCertificate cert;
    const std::string space = field(j, "space").get<std::string>();
    if (space == "Q")
        cert.space = CertSpace::q_subspace;
    else if (space == "hermitian")
        cert.space = CertSpace::hermitian;
    else
        throw usage_error("JSON: certificate space must be \"Q\" or \"hermitian\"");
    cert.layout = layout_from_json(field(j, "layout"));
    for (const json& term : field(j, "terms")) {
        CertTerm t;
        t.weight = number(field(term, "weight"), "certificate weight");
        for (const json& f : field(term, "factors")) t.factors.push_back(matrix_from_json(f));
        if (t.factors.size() != cert.layout.party_count())
            throw usage_error("JSON: certificate term factor count does not match the layout");
        cert.terms.push_back(std::move(t));
    }
    cert.target = matrix_from_json(field(j, "target"));
    return cert;
}

json losr_to_json(const LosrForm& form) {
    json terms = json::array();
    for (const LosrTerm& term : form.terms) {
        json channels = json::array();
        for (const KrausChannel& ch : term.channels) channels.push_back(channel_to_json(ch));
        terms.push_back({{"prob", term.prob}, {"channels", std::move(channels)}});
    }
    return json{{"layout", layout_to_json(form.layout)},
                {"normalization", form.normalization},
                {"terms", std::move(terms)}};
}

LosrForm losr_from_json(const json& j) {
    LosrForm form;
    form.layout = layout_from_json(field(j, "layout"));
    form.normalization = number(field(j, "normalization"), "normalization");
    for (const json& term : field(j, "terms")) {
        LosrTerm t;
        t.prob = number(field(term, "prob"), "term probability");
        for (const json& ch : field(term, "channels")) t.channels.push_back(kraus_from_json(ch));
        if (t.channels.size() != form.layout.party_count())
            throw usage_error("JSON: mixture term channel count does not match the layout");
        form.terms.push_back(std::move(t));
    }
    return form;
}

json game_to_json(const Game& game) {
    json rho = json::array();
    json verdicts = json::array();
    for (const ComplexMatrix& q : game.questions) rho.push_back(matrix_to_json(q));
    for (const ComplexMatrix& v : game.verdicts) verdicts.push_back(matrix_to_json(v));
    return json{{"q", game.question_count},
                {"pi", game.prior},
                {"rho", std::move(rho)},
                {"V", std::move(verdicts)},
                {"accept", matrix_to_json(game.accept)},
                {"dims", json{{"referee", game.referee_dim}, {"layout", layout_to_json(game.layout)}}}};
}

Game game_from_json(const json& j) {
    Game game;
    game.question_count = size_field(j, "q");
    const json& pi = field(j, "pi");
    if (!pi.is_array()) throw usage_error("JSON: game prior must be an array");
    for (const json& p : pi) game.prior.push_back(number(p, "prior entry"));
    for (const json& q : field(j, "rho")) game.questions.push_back(matrix_from_json(q));
    for (const json& v : field(j, "V")) game.verdicts.push_back(matrix_from_json(v));
    game.accept = matrix_from_json(field(j, "accept"));
    const json& dims = field(j, "dims");
    game.referee_dim = size_field(dims, "referee");
    game.layout = layout_from_json(field(dims, "layout"));
    game.validate();
    return game;
}

json witness_to_json(const Witness& w) {
    json factors = json::array();
    for (const ComplexMatrix& f : w.audit.arg_factors) factors.push_back(matrix_to_json(f));
    return json{{"H", matrix_to_json(w.h)},
                {"audit", json{{"min_value", w.audit.min_value}, {"factors", std::move(factors)}}},
                {"value", w.value},
                {"margin", w.margin},
                {"certifies", w.certifies}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open file: " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw usage_error("malformed JSON in file: " + path);
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw usage_error("cannot write file: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw usage_error("failed while writing file: " + path);
}

} // namespace localops
