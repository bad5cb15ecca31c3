// Copyright 2026 The amg-lab Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include "amg/net.hpp"
#include "amg/snapshot.hpp"
#include "test_util.hpp"

using namespace amg;

TEST_CASE("forward basics") {
  DenseNet zero({3, 4, 2});
  const Eigen::VectorXd x = Eigen::VectorXd::Random(3);
  CHECK(zero.forward(x).isZero());

  // Single linear layer with identity weights reproduces the input.
  DenseNet id({3, 3});
  id.params().segment(0, 9) << 1, 0, 0, 0, 1, 0, 0, 0, 1;
  CHECK((id.forward(x) - x).norm() == 0.0);

  Rng rng(7);
  const DenseNet net = DenseNet::random({5, 16, 16, 3}, rng);
  const Eigen::VectorXd x5 = Eigen::VectorXd::Random(5);
  const Eigen::VectorXd once = net.forward(x5);
  const Eigen::VectorXd twice = net.forward(x5);
  CHECK((once - twice).norm() == 0.0);

  Rng rng2(7);
  const DenseNet same = DenseNet::random({5, 16, 16, 3}, rng2);
  CHECK((same.params() - net.params()).norm() == 0.0);

  CHECK_THROWS_AS(net.forward(Eigen::VectorXd::Zero(4)), std::logic_error);
}

TEST_CASE("backward scalar example") {
  // f(x) = w * x with x = 3: dL/dw = 3 when dL/df = 1.
  DenseNet net({1, 1});
  net.params()[0] = 2.0;  // w
  Trace trace;
  Eigen::VectorXd x(1);
  x << 3.0;
  net.forward(x, trace);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(net.param_count());
  Eigen::VectorXd dy(1);
  dy << 1.0;
  const Eigen::VectorXd dx = net.backward(trace, dy, grad);
  CHECK(grad[0] == 3.0);  // dL/dw
  CHECK(grad[1] == 1.0);  // dL/db
  CHECK(dx[0] == 2.0);    // dL/dx = w
}

TEST_CASE("backward without forward is a contract violation") {
  DenseNet net({2, 2});
  Trace trace;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(net.param_count());
  CHECK_THROWS_AS(net.backward(trace, Eigen::VectorXd::Zero(2), grad),
                  std::logic_error);
}

TEST_CASE("zero output gradient gives zero parameter gradients") {
  Rng rng(3);
  DenseNet net = DenseNet::random({4, 8, 3}, rng);
  Trace trace;
  net.forward(rng.normal_vec(4), trace);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(net.param_count());
  net.backward(trace, Eigen::VectorXd::Zero(3), grad);
  CHECK(grad.isZero());
}

TEST_CASE("gradients match central finite differences") {
  for (std::uint64_t seed : {11u, 12u, 13u, 14u}) {
    Rng rng(seed);
    DenseNet net = DenseNet::random({4, 8, 8, 3}, rng);
    const Eigen::VectorXd x = rng.normal_vec(4);
    const Eigen::VectorXd w = rng.normal_vec(3);  // random loss direction

    const auto loss = [&] { return w.dot(net.forward(x)); };
    Eigen::VectorXd analytic = Eigen::VectorXd::Zero(net.param_count());
    Trace trace;
    net.forward(x, trace);
    net.backward(trace, w, analytic);

    const Eigen::VectorXd numeric = amg_test::fd_grad(loss, net.params());
    CHECK(amg_test::max_rel_err(analytic, numeric) < 1e-4);
  }
}

TEST_CASE("adam") {
  Eigen::VectorXd params = Eigen::VectorXd::Constant(3, 1.0);
  AdamState state(3, 0.01);

  SUBCASE("zero gradient leaves parameters unchanged") {
    adam_step(state, params, Eigen::VectorXd::Zero(3));
    CHECK((params.array() == 1.0).all());
  }

  SUBCASE("first step moves by about lr * sign(gradient)") {
    Eigen::VectorXd grad(3);
    grad << 0.5, -2.0, 1e-3;
    adam_step(state, params, grad);
    for (int i = 0; i < 3; ++i) {
      const double moved = params[i] - 1.0;
      CHECK(moved * grad[i] < 0.0);
      CHECK(std::abs(std::abs(moved) - 0.01) < 1e-4);
    }
  }

  SUBCASE("identical inputs give identical trajectories") {
    Eigen::VectorXd a = params, b = params;
    AdamState sa(3, 0.02), sb(3, 0.02);
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
      const Eigen::VectorXd g = rng.normal_vec(3);
      adam_step(sa, a, g);
      adam_step(sb, b, g);
    }
    CHECK((a - b).norm() == 0.0);
  }
}

TEST_CASE("parameter snapshot round trip") {
  Rng rng(55);
  DenseNet net = DenseNet::random({4, 8, 2}, rng);
  const std::string path = "/tmp/amg_snapshot_test.bin";
  amg::write_param_snapshot(path, {{"policy", net.params()},
                                   {"gain", Eigen::VectorXd::Constant(1, 0.5)}});
  const auto loaded = amg::read_param_snapshot(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].first == "policy");
  CHECK((loaded[0].second - net.params()).norm() == 0.0);
  CHECK(loaded[1].second[0] == 0.5);
  CHECK_THROWS_AS(amg::read_param_snapshot("/tmp/does_not_exist.bin"),
                  ConfigError);
}
