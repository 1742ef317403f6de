#include "localops/canonical.hpp"

#include <cmath>

#include "localops/layout.hpp"
#include "localops/tensor.hpp"

namespace localops {

namespace {

const SystemLayout& two_qubit_layout() {
    static const SystemLayout layout({PartyDims{2, 2}, PartyDims{2, 2}});
    return layout;
}

// e_out e_in^T on a qubit.
ComplexMatrix relabel(std::size_t in, std::size_t out) {
    ComplexMatrix m = ComplexMatrix::zero(2, 2);
    m.at(out, in) = cplx(1.0, 0.0);
    return m;
}

} // namespace

KrausChannel completely_noisy(const SystemLayout& layout) {
    layout.validate();
    const std::size_t d_a = layout.dout_total();
    const std::size_t d_x = layout.din_total();
    const double scale = 1.0 / std::sqrt(double(d_a));
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(d_a * d_x);
    for (std::size_t a = 0; a < d_a; ++a)
        for (std::size_t x = 0; x < d_x; ++x) {
            ComplexMatrix k = ComplexMatrix::zero(d_a, d_x);
            k.at(a, x) = cplx(scale, 0.0);
            kraus.push_back(k);
        }
    return KrausChannel{layout, kraus};
}

namespace {

// Per-party relabelings (in, out) for the eight product Kraus terms.
struct BoxTerm {
    std::size_t in1, out1, in2, out2;
};

constexpr BoxTerm kBoxTerms[8] = {
    {0, 0, 0, 0}, {0, 1, 0, 1}, // questions (0,0): equal answers
    {0, 0, 1, 0}, {0, 1, 1, 1}, // questions (0,1): equal answers
    {1, 0, 0, 0}, {1, 1, 0, 1}, // questions (1,0): equal answers
    {1, 0, 1, 1}, {1, 1, 1, 0}, // questions (1,1): opposite answers
};

} // namespace

KrausChannel pr_box() {
    const double scale = 1.0 / std::sqrt(2.0);
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(8);
    for (const BoxTerm& t : kBoxTerms)
        kraus.push_back(kron(relabel(t.in1, t.out1), relabel(t.in2, t.out2)) * cplx(scale, 0.0));
    return KrausChannel{two_qubit_layout(), kraus};
}

SeparableCertificate pr_box_separable_certificate() {
    const SystemLayout& layout = two_qubit_layout();

    // Each Kraus term is a product, so its Choi contribution splits into the
    // vectorized per-party factors; the 1/2 amplitude squares into the weight.
    auto vec_factor = [](std::size_t in, std::size_t out) {
        ComplexMatrix k = relabel(in, out);
        ComplexMatrix f = ComplexMatrix::zero(4, 4);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c)
                f.at(r, c) = k.at(r / 2, r % 2) * std::conj(k.at(c / 2, c % 2));
        return f;
    };

    SeparableCertificate cert;
    cert.space = CertSpace::hermitian;
    cert.layout = layout;
    for (const BoxTerm& t : kBoxTerms)
        cert.terms.push_back(CertTerm{0.5, {vec_factor(t.in1, t.out1), vec_factor(t.in2, t.out2)}});
    cert.target = to_grouped(choi_of_kraus(pr_box()).matrix, layout);
    return cert;
}

KrausChannel swap_channel() {
    ComplexMatrix s = ComplexMatrix::zero(4, 4);
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l)
            s.at(2 * l + k, 2 * k + l) = cplx(1.0, 0.0);
    return KrausChannel{two_qubit_layout(), {s}};
}

Game chsh_game() {
    Game game;
    game.question_count = 4;
    game.prior = {0.25, 0.25, 0.25, 0.25};
    game.referee_dim = 4;
    game.layout = two_qubit_layout();

    const std::size_t dim = 16; // referee register (x) two bits
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
            const std::size_t q = 2 * a + b;

            // |q, a, b><q, a, b| on V (x) X_1 (x) X_2.
            ComplexMatrix rho = ComplexMatrix::zero(dim, dim);
            const std::size_t basis = q * 4 + a * 2 + b;
            rho.at(basis, basis) = cplx(1.0, 0.0);
            game.questions.push_back(rho);

            // |v, x, y> -> |v, x xor y xor (a and b), y>: answers with the
            // right parity land on a zero flag bit.
            const std::size_t flip = a & b;
            ComplexMatrix verdict = ComplexMatrix::zero(dim, dim);
            for (std::size_t v = 0; v < 4; ++v)
                for (std::size_t x = 0; x < 2; ++x)
                    for (std::size_t y = 0; y < 2; ++y)
                        verdict.at(v * 4 + (x ^ y ^ flip) * 2 + y, v * 4 + x * 2 + y) =
                            cplx(1.0, 0.0);
            game.verdicts.push_back(verdict);
        }

    game.accept = ComplexMatrix::zero(dim, dim);
    for (std::size_t v = 0; v < 4; ++v)
        for (std::size_t y = 0; y < 2; ++y)
            game.accept.at(v * 4 + y, v * 4 + y) = cplx(1.0, 0.0);

    return game;
}

ComplexMatrix chsh_witness() {
    return ComplexMatrix::identity(16) * cplx(3.0 / 16.0, 0.0) - payoff_operator(chsh_game());
}

} // namespace localops
