#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "layers.hpp"
#include "rng.hpp"
#include "tensor.hpp"

using namespace radar_ood;

namespace {

Tensor random_tensor(std::vector<std::size_t> shape, std::mt19937_64& eng, double lo = -1.0,
                     double hi = 1.0) {
    Tensor t(std::move(shape));
    for (double& v : t.data) v = uniform_in(eng, lo, hi);
    return t;
}

// Direct definition of zero-same-padded 3x3 cross-correlation.
Tensor brute_conv(const Tensor& x, const Tensor& k, const Tensor& b) {
    const std::size_t h = x.dim(0), w = x.dim(1), c_in = x.dim(2), c_out = k.dim(3);
    Tensor out({h, w, c_out});
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j)
            for (std::size_t co = 0; co < c_out; ++co) {
                double acc = b.data[co];
                for (std::size_t ki = 0; ki < 3; ++ki)
                    for (std::size_t kj = 0; kj < 3; ++kj)
                        for (std::size_t ci = 0; ci < c_in; ++ci) {
                            const long ii = long(i) + long(ki) - 1;
                            const long jj = long(j) + long(kj) - 1;
                            if (ii < 0 || ii >= long(h) || jj < 0 || jj >= long(w)) continue;
                            acc += x.at3(std::size_t(ii), std::size_t(jj), ci) *
                                   k.at4(ki, kj, ci, co);
                        }
                out.at3(i, j, co) = acc;
            }
    return out;
}

double dot(const Tensor& a, const Tensor& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a.data[i] * b.data[i];
    return acc;
}

Tensor swap_channels(const Tensor& k) {
    const std::size_t c_in = k.dim(2), c_out = k.dim(3);
    Tensor out({3, 3, c_out, c_in});
    for (std::size_t ki = 0; ki < 3; ++ki)
        for (std::size_t kj = 0; kj < 3; ++kj)
            for (std::size_t ci = 0; ci < c_in; ++ci)
                for (std::size_t co = 0; co < c_out; ++co)
                    out.at4(ki, kj, co, ci) = k.at4(ki, kj, ci, co);
    return out;
}

void seed_network(Network& net, std::mt19937_64& eng) {
    for (auto* p : net.parameters())
        for (double& v : p->data) v = uniform_in(eng, -0.5, 0.5);
}

double loss_of(const Network& net, const Tensor& input, const Tensor& target) {
    return bce_loss(net.forward(input), target);
}

// Central finite differences over every parameter (and a few input pixels)
// against the analytic backward pass.
void check_gradients(Network& net, const Tensor& input, const Tensor& target) {
    ForwardTrace trace;
    Tensor out = net.forward(input, trace);
    auto grads = net.zero_grads();
    Tensor input_grad = net.backward(trace, bce_grad(out, target), grads);

    const double h = 1e-5;
    auto compare = [&](double analytic, double numeric) {
        const double denom = std::max(std::abs(analytic), std::abs(numeric));
        if (denom < 1e-7) return; // both effectively zero
        CHECK(std::abs(analytic - numeric) <= 1e-4 * denom + 1e-8);
    };

    for (std::size_t li = 0; li < net.layers.size(); ++li) {
        if (!net.layers[li].has_params()) continue;
        for (int which = 0; which < 2; ++which) {
            Tensor& param = which == 0 ? net.layers[li].weights : net.layers[li].bias;
            const Tensor& grad = which == 0 ? grads[li].weights : grads[li].bias;
            for (std::size_t idx = 0; idx < param.size(); ++idx) {
                const double saved = param.data[idx];
                param.data[idx] = saved + h;
                const double lp = loss_of(net, input, target);
                param.data[idx] = saved - h;
                const double lm = loss_of(net, input, target);
                param.data[idx] = saved;
                compare(grad.data[idx], (lp - lm) / (2.0 * h));
            }
        }
    }

    Tensor probe = input;
    const std::size_t step = std::max<std::size_t>(1, probe.size() / 16);
    for (std::size_t idx = 0; idx < probe.size(); idx += step) {
        const double saved = probe.data[idx];
        probe.data[idx] = saved + h;
        const double lp = loss_of(net, probe, target);
        probe.data[idx] = saved - h;
        const double lm = loss_of(net, probe, target);
        probe.data[idx] = saved;
        compare(input_grad.data[idx], (lp - lm) / (2.0 * h));
    }
}

Tensor random_target(const std::vector<std::size_t>& shape, std::mt19937_64& eng) {
    Tensor t(shape);
    for (double& v : t.data) v = uniform_in(eng, 0.05, 0.95);
    return t;
}

} // namespace

TEST_CASE("conv2d identity kernel reproduces the input") {
    std::mt19937_64 eng(1);
    auto x = random_tensor({5, 7, 1}, eng);
    Tensor k({3, 3, 1, 1});
    k.at4(1, 1, 0, 0) = 1.0;
    Tensor b({1});
    auto y = conv2d_forward(x, k, b);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(y.data[i] == x.data[i]);
}

TEST_CASE("conv2d all-ones kernel sums the 3x3 box") {
    Tensor x({6, 6, 1});
    x.fill(2.0);
    Tensor k({3, 3, 1, 1});
    k.fill(1.0);
    Tensor b({1});
    auto y = conv2d_forward(x, k, b);
    for (std::size_t i = 1; i < 5; ++i)
        for (std::size_t j = 1; j < 5; ++j)
            CHECK(y.at3(i, j, 0) == doctest::Approx(18.0).epsilon(1e-12));
    CHECK(y.at3(0, 0, 0) == doctest::Approx(8.0).epsilon(1e-12)); // corner sees 4 taps
}

TEST_CASE("conv2d matches the brute-force reference") {
    std::mt19937_64 eng(2);
    auto x = random_tensor({5, 5, 2}, eng);
    auto k = random_tensor({3, 3, 2, 3}, eng);
    auto b = random_tensor({3}, eng);
    auto fast = conv2d_forward(x, k, b);
    auto slow = brute_conv(x, k, b);
    for (std::size_t i = 0; i < fast.size(); ++i)
        CHECK(std::abs(fast.data[i] - slow.data[i]) < 1e-12);
}

TEST_CASE("conv2d rejects channel mismatches") {
    Tensor x({4, 4, 2}), k({3, 3, 3, 4}), b({4});
    CHECK_THROWS_AS(conv2d_forward(x, k, b), std::invalid_argument);
}

TEST_CASE("tconv2d center-one kernel is the identity") {
    std::mt19937_64 eng(3);
    auto x = random_tensor({4, 6, 1}, eng);
    Tensor k({3, 3, 1, 1});
    k.at4(1, 1, 0, 0) = 1.0;
    Tensor b({1});
    auto y = tconv2d_forward(x, k, b);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(y.data[i] == x.data[i]);
}

TEST_CASE("tconv2d zero input broadcasts the bias") {
    Tensor x({4, 4, 2});
    std::mt19937_64 eng(4);
    auto k = random_tensor({3, 3, 2, 3}, eng);
    Tensor b({3});
    b.data = {0.1, -0.2, 0.3};
    auto y = tconv2d_forward(x, k, b);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t c = 0; c < 3; ++c)
                CHECK(y.at3(i, j, c) == b.data[c]);
}

TEST_CASE("conv and tconv are adjoint under channel swap") {
    std::mt19937_64 eng(5);
    for (int draw = 0; draw < 20; ++draw) {
        const std::size_t h = 2 + eng() % 5, w = 2 + eng() % 5;
        const std::size_t c_in = 1 + eng() % 3, c_out = 1 + eng() % 3;
        auto x = random_tensor({h, w, c_in}, eng);
        auto y = random_tensor({h, w, c_out}, eng);
        auto k = random_tensor({3, 3, c_in, c_out}, eng);
        Tensor zero_out({c_out}), zero_in({c_in});

        const double lhs = dot(conv2d_forward(x, k, zero_out), y);
        const double rhs = dot(x, tconv2d_forward(y, swap_channels(k), zero_in));
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("maxpool2d picks window maxima with first-index ties") {
    Tensor x({2, 2, 1});
    x.data = {1.0, 2.0, 3.0, 4.0};
    std::vector<std::uint32_t> argmax;
    auto y = maxpool2d_forward(x, argmax);
    REQUIRE(y.size() == 1);
    CHECK(y.data[0] == 4.0);
    CHECK(argmax[0] == 3);

    Tensor flat({4, 4, 1});
    flat.fill(7.0);
    auto c = maxpool2d_forward(flat, argmax);
    for (double v : c.data) CHECK(v == 7.0);
    CHECK(argmax[0] == 0); // ties break to the first row-major index
    CHECK(argmax[1] == 2);

    Tensor odd({3, 4, 1});
    CHECK_THROWS_AS(maxpool2d_forward(odd, argmax), std::invalid_argument);
}

TEST_CASE("maxpool2d matches a brute-force window max") {
    std::mt19937_64 eng(6);
    auto x = random_tensor({8, 8, 2}, eng);
    std::vector<std::uint32_t> argmax;
    auto y = maxpool2d_forward(x, argmax);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t c = 0; c < 2; ++c) {
                double best = -1e300;
                for (std::size_t di = 0; di < 2; ++di)
                    for (std::size_t dj = 0; dj < 2; ++dj)
                        best = std::max(best, x.at3(2 * i + di, 2 * j + dj, c));
                CHECK(y.at3(i, j, c) == best);
            }
}

TEST_CASE("upsample2d repeats pixels and conserves mass x4") {
    Tensor x({1, 1, 1});
    x.data = {3.25};
    auto y = upsample2d_forward(x);
    REQUIRE(y.shape == std::vector<std::size_t>{2, 2, 1});
    for (double v : y.data) CHECK(v == 3.25);

    std::mt19937_64 eng(7);
    auto z = random_tensor({3, 5, 2}, eng);
    auto up = upsample2d_forward(z);
    double sum_z = 0.0, sum_up = 0.0;
    for (double v : z.data) sum_z += v;
    for (double v : up.data) sum_up += v;
    CHECK(sum_up == doctest::Approx(4.0 * sum_z).epsilon(1e-12));

    // stride-2 top-left sampling inverts it exactly
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            for (std::size_t c = 0; c < 2; ++c)
                CHECK(up.at3(2 * i, 2 * j, c) == z.at3(i, j, c));
}

TEST_CASE("dense layer identity, zero input, and brute-force oracle") {
    std::mt19937_64 eng(8);

    Tensor ident({4, 4});
    for (std::size_t i = 0; i < 4; ++i) ident.at2(i, i) = 1.0;
    Tensor zero_b({4});
    auto x = random_tensor({4}, eng);
    auto y = dense_forward(x, ident, zero_b);
    for (std::size_t i = 0; i < 4; ++i) CHECK(y.data[i] == x.data[i]);

    auto w = random_tensor({6, 3}, eng);
    auto b = random_tensor({3}, eng);
    Tensor zeros({6});
    auto bias_only = dense_forward(zeros, w, b);
    for (std::size_t i = 0; i < 3; ++i) CHECK(bias_only.data[i] == b.data[i]);

    auto input = random_tensor({6}, eng);
    auto out = dense_forward(input, w, b);
    for (std::size_t j = 0; j < 3; ++j) {
        double acc = b.data[j];
        for (std::size_t i = 0; i < 6; ++i) acc += input.data[i] * w.at2(i, j);
        CHECK(std::abs(out.data[j] - acc) < 1e-12);
    }

    CHECK_THROWS_AS(dense_forward(random_tensor({5}, eng), w, b), std::invalid_argument);
}

TEST_CASE("bce_loss analytic values and properties") {
    Tensor half({4});
    half.fill(0.5);
    CHECK(bce_loss(half, half) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    Tensor p({4}), t({4});
    p.data = {kBceClamp, 1.0 - kBceClamp, kBceClamp, 1.0 - kBceClamp};
    t.data = p.data;
    CHECK(bce_loss(p, t) < 1e-5);
    CHECK(bce_loss(p, t) >= 0.0);

    std::mt19937_64 eng(9);
    auto pr = random_tensor({32}, eng, 0.01, 0.99);
    auto tr = random_tensor({32}, eng, 0.0, 1.0);
    double expected = 0.0;
    for (std::size_t i = 0; i < 32; ++i)
        expected -= tr.data[i] * std::log(pr.data[i]) +
                    (1.0 - tr.data[i]) * std::log(1.0 - pr.data[i]);
    expected /= 32.0;
    CHECK(bce_loss(pr, tr) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(bce_loss(pr, tr) >= 0.0);

    CHECK_THROWS_AS(bce_loss(Tensor({3}), Tensor({4})), std::invalid_argument);
}

TEST_CASE("bce_grad vanishes when prediction equals target") {
    std::mt19937_64 eng(10);
    auto p = random_tensor({16}, eng, 0.1, 0.9);
    auto g = bce_grad(p, p);
    for (double v : g.data) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("gradient check: conv2d") {
    std::mt19937_64 eng(100);
    for (int draw = 0; draw < 20; ++draw) {
        const std::size_t h = 2 + eng() % 4, w = 2 + eng() % 4;
        const std::size_t c_in = 1 + eng() % 2, c_out = 1 + eng() % 3;
        Network net{{make_conv2d(c_in, c_out), make_sigmoid()}};
        seed_network(net, eng);
        auto input = random_tensor({h, w, c_in}, eng);
        auto target = random_target({h, w, c_out}, eng);
        check_gradients(net, input, target);
    }
}

TEST_CASE("gradient check: tconv2d") {
    std::mt19937_64 eng(101);
    for (int draw = 0; draw < 20; ++draw) {
        const std::size_t h = 2 + eng() % 4, w = 2 + eng() % 4;
        const std::size_t c_in = 1 + eng() % 3, c_out = 1 + eng() % 2;
        Network net{{make_tconv2d(c_in, c_out), make_sigmoid()}};
        seed_network(net, eng);
        auto input = random_tensor({h, w, c_in}, eng);
        auto target = random_target({h, w, c_out}, eng);
        check_gradients(net, input, target);
    }
}

TEST_CASE("gradient check: dense") {
    std::mt19937_64 eng(102);
    for (int draw = 0; draw < 20; ++draw) {
        const std::size_t n = 2 + eng() % 6, m = 1 + eng() % 5;
        Network net{{make_dense(n, m), make_sigmoid()}};
        seed_network(net, eng);
        auto input = random_tensor({n}, eng);
        auto target = random_target({m}, eng);
        check_gradients(net, input, target);
    }
}

TEST_CASE("gradient check: maxpool2d path") {
    std::mt19937_64 eng(103);
    for (int draw = 0; draw < 20; ++draw) {
        const std::size_t h = 4, w = 4 + 2 * (eng() % 2);
        Network net{{make_conv2d(1, 2), make_relu(), make_maxpool2d(), make_flatten(),
                     make_dense((h / 2) * (w / 2) * 2, 3), make_sigmoid()}};
        seed_network(net, eng);
        auto input = random_tensor({h, w, 1}, eng);
        auto target = random_target({3}, eng);
        check_gradients(net, input, target);
    }
}

TEST_CASE("gradient check: upsample2d path") {
    std::mt19937_64 eng(104);
    for (int draw = 0; draw < 20; ++draw) {
        const std::size_t h = 2 + eng() % 3, w = 2 + eng() % 3;
        Network net{{make_tconv2d(2, 2), make_relu(), make_upsample2d(), make_tconv2d(2, 1),
                     make_sigmoid()}};
        seed_network(net, eng);
        auto input = random_tensor({h, w, 2}, eng);
        auto target = random_target({2 * h, 2 * w, 1}, eng);
        check_gradients(net, input, target);
    }
}

TEST_CASE("gradient check: relu and reshape paths") {
    std::mt19937_64 eng(105);
    for (int draw = 0; draw < 20; ++draw) {
        Network net{{make_flatten(), make_dense(12, 8), make_relu(), make_dense(8, 12),
                     make_reshape({2, 3, 2}), make_sigmoid()}};
        seed_network(net, eng);
        auto input = random_tensor({2, 3, 2}, eng);
        auto target = random_target({2, 3, 2}, eng);
        check_gradients(net, input, target);
    }
}

TEST_CASE("gradient check: full miniature autoencoder") {
    std::mt19937_64 eng(106);
    for (int draw = 0; draw < 3; ++draw) {
        Network net{{make_conv2d(1, 2), make_relu(), make_maxpool2d(), make_flatten(),
                     make_dense(32, 8), make_dense(8, 32), make_reshape({4, 4, 2}),
                     make_tconv2d(2, 2), make_relu(), make_upsample2d(), make_tconv2d(2, 1),
                     make_sigmoid()}};
        seed_network(net, eng);
        auto input = random_tensor({8, 8, 1}, eng, 0.0, 1.0);
        auto target = random_target({8, 8, 1}, eng);
        check_gradients(net, input, target);
    }
}

TEST_CASE("relu gradient is zero at and below zero") {
    Tensor x({4});
    x.data = {-1.0, 0.0, 0.5, 2.0};
    Tensor g({4});
    g.fill(1.0);
    auto gi = relu_backward(x, g);
    CHECK(gi.data[0] == 0.0);
    CHECK(gi.data[1] == 0.0);
    CHECK(gi.data[2] == 1.0);
    CHECK(gi.data[3] == 1.0);
}

TEST_CASE("forward and backward are deterministic") {
    std::mt19937_64 eng(107);
    Network net{{make_conv2d(1, 2), make_relu(), make_maxpool2d(), make_flatten(),
                 make_dense(8, 4), make_sigmoid()}};
    seed_network(net, eng);
    auto input = random_tensor({4, 4, 1}, eng);
    auto target = random_target({4}, eng);

    ForwardTrace t1, t2;
    auto o1 = net.forward(input, t1);
    auto o2 = net.forward(input, t2);
    CHECK(o1.data == o2.data);

    auto g1 = net.zero_grads(), g2 = net.zero_grads();
    auto i1 = net.backward(t1, bce_grad(o1, target), g1);
    auto i2 = net.backward(t2, bce_grad(o2, target), g2);
    CHECK(i1.data == i2.data);
    for (std::size_t li = 0; li < g1.size(); ++li) {
        CHECK(g1[li].weights.data == g2[li].weights.data);
        CHECK(g1[li].bias.data == g2[li].bias.data);
    }
}

TEST_CASE("adam: zero gradients leave parameters unchanged") {
    Tensor w({3});
    w.data = {1.0, -2.0, 3.0};
    std::vector<Tensor*> params{&w};
    auto state = make_adam_state(params, 1e-3);
    Tensor g({3});
    std::vector<const Tensor*> grads{&g};
    for (int i = 0; i < 10; ++i) adam_step(params, grads, state);
    CHECK(w.data == std::vector<double>{1.0, -2.0, 3.0});
    CHECK(state.step == 10);
}

TEST_CASE("adam: first step matches the closed form") {
    Tensor w({3});
    w.data = {0.0, 0.0, 0.0};
    Tensor g({3});
    g.data = {1.0, -0.5, 2.0};
    std::vector<Tensor*> params{&w};
    std::vector<const Tensor*> grads{&g};
    auto state = make_adam_state(params, 1e-3);
    adam_step(params, grads, state);

    for (std::size_t i = 0; i < 3; ++i) {
        const double gi = g.data[i];
        // canonical bias-corrected first step: lr * g / (|g| + eps)
        const double canonical = -1e-3 * gi / (std::abs(gi) + state.epsilon);
        CHECK(w.data[i] == doctest::Approx(canonical).epsilon(1e-12));
        // folded-epsilon variant of the same closed form
        const double folded = -1e-3 * gi /
                              (std::abs(gi) + state.epsilon * std::sqrt(1.0 - state.beta2) /
                                                  (1.0 - state.beta1));
        CHECK(std::abs(w.data[i] - folded) < 1e-9);
        CHECK(std::abs(std::abs(w.data[i]) - 1e-3) < 1e-5); // ~lr * sign(g)
    }
}

// Canonical Adam at lr=1e-3 reaches |w| < 1e-3 only at step ~2722 (verified
// against an independent implementation), so the bowl runs at lr=5e-3.
TEST_CASE("adam: converges on a quadratic bowl") {
    Tensor w({1});
    w.data = {1.0};
    std::vector<Tensor*> params{&w};
    auto state = make_adam_state(params, 5e-3);
    Tensor g({1});
    std::vector<const Tensor*> grads{&g};
    for (int i = 0; i < 2000; ++i) {
        g.data[0] = 2.0 * w.data[0];
        adam_step(params, grads, state);
    }
    CHECK(std::abs(w.data[0]) < 1e-3);
}

TEST_CASE("adam rejects mismatched shapes") {
    Tensor w({3}), g({4});
    std::vector<Tensor*> params{&w};
    std::vector<const Tensor*> grads{&g};
    auto state = make_adam_state(params, 1e-3);
    CHECK_THROWS_AS(adam_step(params, grads, state), std::invalid_argument);
}
