#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numeric>
#include <stdexcept>

#include "ecpe/emotion_model.hpp"
#include "ecpe/error.hpp"
#include "ecpe/gradcheck.hpp"
#include "ecpe/nn.hpp"

using namespace ecpe;
using nn::Vector;

namespace {

Vector random_vector(nn::Rng& rng, std::size_t n)
{
    Vector v(n);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

std::vector<Vector> random_sequence(nn::Rng& rng, std::size_t len, std::size_t dim)
{
    std::vector<Vector> seq;
    for (std::size_t t = 0; t < len; ++t) seq.push_back(random_vector(rng, dim));
    return seq;
}

}  // namespace

TEST_CASE("rng is reproducible")
{
    nn::Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    nn::Rng r(1);
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(r.below(7) < 7);
    }
}

TEST_CASE("activations")
{
    CHECK(nn::sigmoid(0.0) == 0.5);
    CHECK(std::abs(nn::sigmoid(2.0) - 0.880797) < 1e-6);
    for (double x : {-30.0, -1.5, 0.3, 4.0, 700.0})
        CHECK(std::abs(nn::sigmoid(-x) - (1.0 - nn::sigmoid(x))) < 1e-12);
    CHECK(std::isfinite(nn::sigmoid(-1000.0)));

    auto e = nn::elu(Vector{0.0, 1.0, -1.0});
    CHECK(e[0] == 0.0);
    CHECK(e[1] == 1.0);
    CHECK(std::abs(e[2] - (-0.632121)) < 1e-6);
    auto de = nn::elu_backward(Vector{2.0, -1.0}, Vector{3.0, 3.0});
    CHECK(de[0] == 3.0);
    CHECK(de[1] == doctest::Approx(3.0 * std::exp(-1.0)));
}

TEST_CASE("log softmax and losses")
{
    auto u = nn::log_softmax(Vector(8, 0.7));
    for (double v : u) CHECK(v == doctest::Approx(-std::log(8.0)));
    CHECK(nn::nll_loss(u, 3) == doctest::Approx(std::log(8.0)));

    nn::Rng rng(4);
    for (int i = 0; i < 50; ++i) {
        auto x = random_vector(rng, 8);
        for (auto& v : x) v *= 50.0;
        auto l = nn::log_softmax(x);
        double s = 0.0;
        for (double v : l) s += std::exp(v);
        CHECK(std::abs(s - 1.0) < 1e-9);
        CHECK(nn::nll_loss(l, 5) == -l[5]);
    }
    auto big = nn::log_softmax(Vector{1000.0, 0.0});
    CHECK(big[0] == doctest::Approx(0.0));
    CHECK(big[1] == doctest::Approx(-1000.0));
    CHECK(nn::nll_loss(Vector{0.0, -1e9}, 0) == 0.0);

    CHECK(nn::bce_loss(0.5, 1) == doctest::Approx(std::log(2.0)));
    CHECK(nn::bce_loss(0.2, 1) == doctest::Approx(-std::log(0.2)));
    CHECK(nn::bce_loss(0.2, 0) == doctest::Approx(-std::log(0.8)));
    CHECK(std::isfinite(nn::bce_loss(0.0, 1)));
    CHECK(nn::bce_loss(0.0, 1) == doctest::Approx(-std::log(1e-7)));
    CHECK(std::isfinite(nn::bce_loss(1.0, 0)));
}

TEST_CASE("dropout")
{
    nn::Rng rng(8);
    Vector x(10000, 1.0);
    CHECK(nn::dropout(x, 0.0, true, rng) == x);
    CHECK(nn::dropout(x, 0.5, false, rng) == x);
    auto y = nn::dropout(x, 0.5, true, rng);
    const auto kept = std::count_if(y.begin(), y.end(), [](double v) { return v != 0.0; });
    CHECK(std::abs(static_cast<double>(kept) / 10000.0 - 0.5) < 0.02);
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / 10000.0;
    CHECK(std::abs(mean - 1.0) < 0.05);
    CHECK_THROWS_AS(nn::dropout(x, 1.0, true, rng), std::invalid_argument);
    CHECK_THROWS_AS(nn::dropout(x, -0.1, true, rng), std::invalid_argument);

    nn::Rng a(3), b(3);
    CHECK(nn::dropout(x, 0.5, true, a) == nn::dropout(x, 0.5, true, b));
}

TEST_CASE("linear layer")
{
    nn::Linear id(2, 2);
    id.weight(0, 0) = 1;
    id.weight(1, 1) = 1;
    CHECK(id.forward(Vector{3, -4}) == Vector{3, -4});

    nn::Linear zero(3, 2);
    zero.bias = {0.5, -0.25};
    CHECK(zero.forward(Vector{9, 9, 9}) == Vector{0.5, -0.25});

    nn::Linear l(2, 3);
    l.weight(0, 0) = 1;   l.weight(0, 1) = 2;
    l.weight(1, 0) = -1;  l.weight(1, 1) = 0.5;
    l.weight(2, 0) = 3;   l.weight(2, 1) = -2;
    l.bias = {0.1, 0.2, 0.3};
    auto y = l.forward(Vector{2, 4});
    CHECK(y[0] == doctest::Approx(10.1));
    CHECK(y[1] == doctest::Approx(0.2));
    CHECK(y[2] == doctest::Approx(-1.7));

    nn::Rng r1(5), r2(5);
    nn::Linear a(4, 3), b(4, 3);
    a.init(r1);
    b.init(r2);
    CHECK(a.weight == b.weight);
    for (double w : a.weight.values()) CHECK(std::abs(w) <= 0.5);
}

TEST_CASE("lstm cell")
{
    nn::Rng rng(1);
    nn::Lstm zero(3, 2);
    auto s = zero.cell(random_vector(rng, 3), Vector(2, 0.0), Vector(2, 0.0));
    CHECK(s.h == Vector{0, 0});
    CHECK(s.c == Vector{0, 0});

    // hidden 1, rows i f g o
    nn::Lstm l(1, 1);
    const double w[] = {0.5, -0.5, 1.0, 0.25};
    const double u[] = {0.1, 0.2, -0.3, 0.4};
    const double b[] = {0.0, 0.1, 0.0, -0.1};
    for (int k = 0; k < 4; ++k) {
        l.w_input(k, 0) = w[k];
        l.w_hidden(k, 0) = u[k];
        l.bias[k] = b[k];
    }
    auto out = l.cell(Vector{1.0}, Vector{0.2}, Vector{-0.3});
    CHECK(std::abs(out.h[0] - 0.181393) < 1e-6);
    CHECK(std::abs(out.c[0] - 0.337805) < 1e-6);

    // Saturated gates: f = 1, i = 0 passes the cell through.
    nn::Lstm sat(1, 1);
    sat.bias = {-100.0, 100.0, 0.3, 0.0};
    auto pass = sat.cell(Vector{0.7}, Vector{0.4}, Vector{-1.25});
    CHECK(pass.c[0] == doctest::Approx(-1.25).epsilon(1e-12));
}

TEST_CASE("bidirectional lstm")
{
    nn::Rng rng(12);
    nn::BiLstm m(3, 4);
    m.init(rng);
    CHECK_THROWS_AS(m.forward(std::vector<Vector>{}), std::invalid_argument);

    auto one = random_sequence(rng, 1, 3);
    auto out = m.forward(one);
    REQUIRE(out.size() == 1);
    auto f = m.forward_dir.cell(one[0], Vector(4, 0.0), Vector(4, 0.0));
    auto b = m.backward_dir.cell(one[0], Vector(4, 0.0), Vector(4, 0.0));
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(out[0][k] == f.h[k]);
        CHECK(out[0][4 + k] == b.h[k]);
    }

    for (std::size_t len = 1; len <= 10; ++len) CHECK(m.forward(random_sequence(rng, len, 3)).size() == len);

    // Same weights in both directions on a palindrome: the output at t is
    // the half-swapped output at T-1-t.
    m.backward_dir = m.forward_dir;
    auto x = random_vector(rng, 3);
    auto mid = random_vector(rng, 3);
    auto pal = m.forward(std::vector<Vector>{x, mid, x});
    for (std::size_t t = 0; t < 3; ++t)
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(pal[t][k] == pal[2 - t][4 + k]);
            CHECK(pal[t][4 + k] == pal[2 - t][k]);
        }

    const std::vector<Vector> seq{x, mid, x};
    auto trace = m.run(seq);
    auto fin = nn::BiLstm::final_states(trace);
    auto outs = nn::BiLstm::outputs(trace);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(fin[k] == outs[2][k]);
        CHECK(fin[4 + k] == outs[0][4 + k]);
    }
}

TEST_CASE("sgd with momentum")
{
    CHECK_THROWS_AS(nn::Sgd({0.0, 0.9}), std::invalid_argument);
    CHECK_THROWS_AS(nn::Sgd({0.1, 1.0}), std::invalid_argument);

    Vector theta{1.5, -2.0}, grad{1.5, -2.0};
    nn::ParamList params{{"p", theta, grad}};
    nn::Sgd plain({1.0, 0.0});
    plain.step(params);
    CHECK(theta == Vector{0.0, 0.0});

    Vector t2{0.3, 0.4}, g2{0.0, 0.0};
    nn::ParamList p2{{"p", t2, g2}};
    nn::Sgd still({0.1, 0.9});
    still.step(p2);
    still.step(p2);
    CHECK(t2 == Vector{0.3, 0.4});

    Vector t3{1.0}, g3{0.5};
    nn::ParamList p3{{"p", t3, g3}};
    nn::Sgd mom({0.003, 0.9});
    mom.step(p3);
    mom.step(p3);
    CHECK(t3[0] == doctest::Approx(1.0 - 0.003 * 0.5 * (1.0 + 1.9)).epsilon(1e-14));
}

TEST_CASE("gradient checks at toy scale")
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        CAPTURE(seed);
        CHECK(check_linear_elu_nll(seed).max_relative_error < kGradCheckTolerance);
        CHECK(check_lstm(seed).max_relative_error < kGradCheckTolerance);
        CHECK(check_bilstm(seed).max_relative_error < kGradCheckTolerance);
        CHECK(check_emotion_architecture(seed).max_relative_error < kGradCheckTolerance);
        CHECK(check_cause_architecture(seed).max_relative_error < kGradCheckTolerance);
    }
}

TEST_CASE("gradient check catches a wrong gradient")
{
    Vector theta{0.7, -0.2}, grad(2);
    nn::GradCheckTarget target;
    target.params = {{"t", theta, grad}};
    target.loss = [&] { return theta[0] * theta[0] + 3.0 * theta[1]; };
    target.loss_and_grad = [&] {
        grad = {2.0 * theta[0], 3.5};
        return target.loss();
    };
    auto r = nn::gradient_check(target);
    CHECK(r.max_relative_error > 0.05);
    CHECK(r.worst_param == "t[1]");
    CHECK(r.checked == 2);
}

TEST_CASE("single-example loss decreases under sgd")
{
    int decreasing = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        nn::Rng rng(seed);
        EmotionClassifier model({6, 8, 10, 0.5});
        model.init(rng);
        auto seq = random_sequence(rng, 5, 6);
        const auto target = kAllEmotions[seed % kNumEmotions];
        auto eval_loss = [&] {
            nn::Rng unused(0);
            return nn::nll_loss(forward_emotion(model, seq, false, unused), index_of(target));
        };
        nn::Sgd sgd({0.003, 0.9});
        auto params = model.params();
        double prev = eval_loss();
        bool ok = true;
        for (int step = 0; step < 5; ++step) {
            nn::zero_grad(params);
            emotion_loss_and_grad(model, seq, target, rng);
            sgd.step(params);
            const double now = eval_loss();
            ok = ok && now < prev;
            prev = now;
        }
        decreasing += ok;
    }
    CHECK(decreasing >= 19);
}

TEST_CASE("parameter files round trip")
{
    nn::Rng rng(6);
    EmotionClassifier model({5, 3, 4, 0.5});
    model.init(rng);
    const auto path = std::filesystem::temp_directory_path() / "ecpe_params_test.bin";
    model.save(path);
    auto back = EmotionClassifier::load(path);
    auto a = model.params();
    auto b = back.params();
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].name == b[k].name);
        CHECK(std::equal(a[k].value.begin(), a[k].value.end(), b[k].value.begin(), b[k].value.end()));
    }
    CHECK(nn::read_descriptor(path) == model.descriptor());

    EmotionClassifier other({5, 4, 4, 0.5});
    CHECK_THROWS_AS(nn::load_params(path, other.descriptor(), other.params()), DataError);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(EmotionClassifier::load(path), DataError);
}
