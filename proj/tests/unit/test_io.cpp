#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "tsms/errors.hpp"
#include "tsms/io.hpp"

using namespace tsms;

TEST_CASE("two-point CSV parses to a Dataset") {
    std::istringstream in("y,x1,x2\n1,0.5,0\n0,-0.5,0\n");
    const AnyDataset any = parse_dataset_csv(in);
    REQUIRE(std::holds_alternative<Dataset>(any));
    const Dataset& d = std::get<Dataset>(any);
    CHECK(d.n() == 2);
    CHECK(d.d() == 2);
    CHECK(d.y == std::vector<double>{1.0, 0.0});
    CHECK(d.X(1, 0) == -0.5);
}

TEST_CASE("out-of-ball rows are reported by number") {
    std::istringstream in("y,x1,x2\n1,1.2,0\n0,0.1,0\n1,0,-1\n");
    try {
        parse_dataset_csv(in);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 1") != std::string::npos);
        CHECK(msg.find("row 3") != std::string::npos);
        CHECK(msg.find("row 2") == std::string::npos);
    }
}

TEST_CASE("multi-index header infers J") {
    std::istringstream in("y,x1_1,x1_2,x2_1,x2_2\n0.3,0.1,0.2,-0.3,0.4\n-0.1,0,0,0.5,0.5\n");
    const AnyDataset any = parse_dataset_csv(in);
    REQUIRE(std::holds_alternative<MultiDataset>(any));
    const MultiDataset& m = std::get<MultiDataset>(any);
    CHECK(m.J == 2);
    CHECK(m.d() == 2);
    CHECK(m.n() == 2);
    CHECK(m.block(0, 1)[1] == 0.4);
}

TEST_CASE("malformed input") {
    for (const char* text : {"", "z,x1,x2\n1,0,0\n", "y,x1,x3\n1,0,0\n", "y,x1_1,x2_2\n1,0,0\n",
                             "y,x1,x2\n1,0\n", "y,x1,x2\n1,abc,0\n", "y,x1,x2\n2,0.1,0\n",
                             "y,x1,x2\n1,nan,0\n", "y,x1\n1,0.1\n"}) {
        std::istringstream in(text);
        CHECK_THROWS_AS(parse_dataset_csv(in), ValidationError);
    }
}

TEST_CASE("write then parse round-trips exactly") {
    Rng rng(1);
    const Dataset d = simulate_binary(200, 3, Direction::normalized(Vector::Ones(3)), ErrorSpec::logistic(), rng);
    std::stringstream s;
    write_dataset_csv(s, d);
    const Dataset back = std::get<Dataset>(parse_dataset_csv(s));
    CHECK(back.y == d.y);
    CHECK(back.X == d.X);

    const MultiDataset m = simulate_multi_index(100, 3, 2, Direction::from_angle(0.2), LinkSpec{}, 0.25, rng);
    std::stringstream t;
    write_dataset_csv(t, m);
    const MultiDataset mb = std::get<MultiDataset>(parse_dataset_csv(t));
    CHECK(mb.J == 3);
    CHECK(mb.y == m.y);
    CHECK(mb.X == m.X);
}

TEST_CASE("key-value config") {
    std::istringstream in("# comment\nestimator = tsms\n\nd = 2\nn_grid = 250, 500, 1000, 2000  # trailing\n"
                          "replications = 60\nbandwidth = theorem1\nseed = 9\n");
    const auto kv = parse_key_values(in);
    CHECK(kv.at("estimator") == "tsms");
    CHECK(kv.at("n_grid") == "250, 500, 1000, 2000");
    const ExperimentSpec s = experiment_spec_from_config(kv);
    CHECK(s.estimator == EstimatorKind::TwoStage);
    CHECK(s.n_grid == std::vector<std::size_t>{250, 500, 1000, 2000});
    CHECK(s.replications == 60);
    CHECK(s.base_seed == 9);

    std::istringstream dup("d = 2\nd = 3\n");
    CHECK_THROWS_AS(parse_key_values(dup), ValidationError);
    std::istringstream bad("just words\n");
    CHECK_THROWS_AS(parse_key_values(bad), ValidationError);
    auto unknown = kv;
    unknown["colour"] = "red";
    CHECK_THROWS_AS(experiment_spec_from_config(unknown), ValidationError);
    auto small = kv;
    small["replications"] = "10";
    CHECK_THROWS_AS(experiment_spec_from_config(small), ValidationError);
    auto neg = kv;
    neg["d"] = "-2";
    CHECK_THROWS_AS(experiment_spec_from_config(neg), ValidationError);
}

TEST_CASE("number lists") {
    CHECK(parse_number_list("1, 2.5,-3") == std::vector<double>{1.0, 2.5, -3.0});
    CHECK_THROWS_AS(parse_number_list("1,,2"), ValidationError);
    CHECK_THROWS_AS(parse_number_list("1,x"), ValidationError);
}
