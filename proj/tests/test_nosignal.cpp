#include <doctest.h>

#include <cmath>

#include "localops/choi.hpp"
#include "localops/eig.hpp"
#include "localops/errors.hpp"
#include "localops/losr.hpp"
#include "localops/nosignal.hpp"
#include "localops/qspace.hpp"
#include "localops/random.hpp"
#include "localops/tensor.hpp"

using namespace localops;

namespace {

const SystemLayout kTwoQubits{{PartyDims{2, 2}, PartyDims{2, 2}}};

ChoiOperator swap_choi() {
    ComplexMatrix s(4, 4);
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) s.at(2 * l + k, 2 * k + l) = 1.0;
    KrausChannel ch{kTwoQubits, {s}};
    return choi_of_kraus(ch);
}

LosrForm random_mixture(const SystemLayout& layout, std::size_t t, RandomSource& rng) {
    LosrForm form;
    form.layout = layout;
    form.normalization = double(layout.dout_total());
    double total = 0.0;
    std::vector<double> w;
    for (std::size_t j = 0; j < t; ++j) {
        w.push_back(0.2 + rng.uniform());
        total += w.back();
    }
    for (std::size_t j = 0; j < t; ++j) {
        LosrTerm term;
        term.prob = w[j] / total;
        for (const auto& p : layout.parties)
            term.channels.push_back(random_cptp(SystemLayout{{p}}, 2, rng));
        form.terms.push_back(std::move(term));
    }
    return form;
}

} // namespace

TEST_CASE("completely noisy channel passes with zero residuals") {
    ChoiOperator noisy{kTwoQubits, ComplexMatrix::identity(16) * cplx(0.25, 0.0)};
    NoSignalReport cons = check_constraints(noisy);
    CHECK(cons.pass);
    CHECK(cons.worst < 1e-13);
    CHECK(cons.entries.size() == 4); // vacuous empty set + three nonempty subsets
    CHECK(cons.entries[0].residual == 0.0);
    CHECK(cons.method == "constraint");

    NoSignalReport sem = check_semantic(noisy, 3, 17);
    CHECK(sem.pass);
    CHECK(sem.worst < 1e-10);
    CHECK(sem.method == "semantic");
}

TEST_CASE("swap channel signals in both directions") {
    ChoiOperator sw = swap_choi();
    REQUIRE(check_cptp(sw).cptp());

    NoSignalReport cons = check_constraints(sw);
    CHECK_FALSE(cons.pass);
    REQUIRE(cons.entries.size() == 4);
    CHECK(cons.entries[1].k_mask == 1);
    CHECK_FALSE(cons.entries[1].pass);
    CHECK(cons.entries[1].residual > 0.5);
    CHECK_FALSE(cons.entries[2].pass);
    // discarding everything only sees the trace-preserving marginal
    CHECK(cons.entries[3].pass);

    NoSignalReport sem = check_semantic(sw, 3, 18);
    CHECK_FALSE(sem.pass);
    CHECK_FALSE(sem.entries[1].pass);
    CHECK(sem.entries[1].residual > 0.1);
    CHECK(sem.entries[3].pass);
}

TEST_CASE("product channels are no-signaling") {
    RandomSource rng(711);
    for (int trial = 0; trial < 4; ++trial) {
        SystemLayout layout = (trial % 2 == 0)
                                  ? kTwoQubits
                                  : SystemLayout{{PartyDims{2, 2}, PartyDims{2, 3}}};
        std::vector<ChoiOperator> parts;
        for (const auto& p : layout.parties)
            parts.push_back(choi_of_kraus(random_cptp(SystemLayout{{p}}, 2, rng)));
        ChoiOperator joint = product_choi(parts);
        CHECK(check_constraints(joint).pass);
        CHECK(check_semantic(joint, 2, 19 + trial).pass);
    }
}

TEST_CASE("mixtures of product channels are no-signaling") {
    RandomSource rng(712);
    LosrForm form = random_mixture(kTwoQubits, 3, rng);
    ChoiOperator mix = form.mixture_choi();
    CHECK(check_constraints(mix).pass);
    CHECK(check_semantic(mix, 3, 20).pass);

    // convexity: averaging two passing channels still passes
    LosrForm form2 = random_mixture(kTwoQubits, 2, rng);
    ComplexMatrix avg = (mix.matrix + form2.mixture_choi().matrix) * cplx(0.5, 0.0);
    ChoiOperator avg_op{kTwoQubits, avg};
    CHECK(check_constraints(avg_op).pass);
    CHECK(check_semantic(avg_op, 3, 21).pass);
}

TEST_CASE("generic joint channels signal and both methods agree") {
    RandomSource rng(713);
    int failures = 0;
    for (int trial = 0; trial < 4; ++trial) {
        ChoiOperator j = choi_of_kraus(random_cptp(kTwoQubits, 2 + trial, rng));
        NoSignalReport cons = check_constraints(j);
        NoSignalReport sem = check_semantic(j, 2, 22 + trial);
        CHECK(cons.pass == sem.pass);
        for (std::size_t e = 0; e < cons.entries.size(); ++e)
            CHECK(cons.entries[e].pass == sem.entries[e].pass);
        if (!cons.pass) ++failures;
    }
    CHECK(failures == 4); // random joint channels signal almost surely
}

TEST_CASE("constraint residuals track the marginal-subspace membership test") {
    RandomSource rng(714);
    LosrForm form = random_mixture(kTwoQubits, 2, rng);
    ChoiOperator mix = form.mixture_choi();
    MembershipReport mrep = in_tensor_Q(mix.matrix, kTwoQubits, 1e-7);
    NoSignalReport cons = check_constraints(mix, 1e-7);
    CHECK(mrep.member == cons.pass);

    ChoiOperator j = choi_of_kraus(random_cptp(kTwoQubits, 3, rng));
    MembershipReport mrep2 = in_tensor_Q(j.matrix, kTwoQubits, 1e-7);
    NoSignalReport cons2 = check_constraints(j, 1e-7);
    CHECK(mrep2.member == cons2.pass);
    CHECK_FALSE(cons2.pass);
}

TEST_CASE("three-party no-signaling enumeration") {
    RandomSource rng(715);
    SystemLayout layout{{PartyDims{2, 2}, PartyDims{2, 2}, PartyDims{2, 2}}};
    std::vector<ChoiOperator> parts;
    for (const auto& p : layout.parties)
        parts.push_back(choi_of_kraus(random_cptp(SystemLayout{{p}}, 2, rng)));
    ChoiOperator joint = product_choi(parts);

    NoSignalReport cons = check_constraints(joint);
    CHECK(cons.pass);
    CHECK(cons.entries.size() == 8);
    NoSignalReport sem = check_semantic(joint, 1, 23);
    CHECK(sem.pass);
    CHECK(sem.entries.size() == 8);
}

TEST_CASE("non-hermitian input is rejected") {
    RandomSource rng(716);
    ChoiOperator bad{kTwoQubits, rng.ginibre(16, 16)};
    CHECK_THROWS_AS(check_constraints(bad), usage_error);
    CHECK_THROWS_AS(check_semantic(bad, 1, 1), usage_error);
}
