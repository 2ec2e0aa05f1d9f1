#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "test_support.hpp"

using namespace maximin;

namespace {

void expect_same(const ProblemInstance& a, const ProblemInstance& b) {
    ASSERT_EQ(a.n(), b.n());
    ASSERT_EQ(a.m(), b.m());
    EXPECT_EQ(a.p(), b.p());
    EXPECT_EQ(a.weights(), b.weights());
    for (std::size_t i = 0; i < a.m(); ++i)
        for (std::size_t j = 0; j < a.n(); ++j) EXPECT_EQ(a.point(i)[j], b.point(i)[j]);
}

}  // namespace

TEST(InstanceIo, RoundTripIsExact) {
    Xoshiro256 gen(99);
    for (NormExponent p : maximin::testing::exponent_grid()) {
        const auto inst = maximin::testing::random_instance(gen, 5, 7, p, true);
        expect_same(inst, read_instance(write_instance(inst)));
    }
}

TEST(InstanceIo, FileRoundTrip) {
    const auto path = std::filesystem::temp_directory_path() / "maximin_io_test.json";
    const auto inst = maximin::testing::example_21();
    save_instance(inst, path.string());
    expect_same(inst, load_instance(path.string()));
    std::filesystem::remove(path);
}

TEST(InstanceIo, InfiniteExponentIsAString) {
    const ProblemInstance inst(1, NormExponent::infinity(), {{0.5}});
    const auto doc = instance_to_json(inst);
    EXPECT_EQ(doc.at("p"), "inf");
    EXPECT_EQ(doc.at("format"), "maximin-instance/1");
    EXPECT_TRUE(read_instance(doc.dump()).p().is_infinite());
}

TEST(InstanceIo, WeightsDefaultToOne) {
    const auto inst = read_instance(R"({"format":"maximin-instance/1","n":1,"m":2,"p":3,"points":[[0.1],[0.2]]})");
    EXPECT_EQ(inst.weights(), (Vector{1.0, 1.0}));
}

TEST(InstanceIo, RejectsMalformedDocuments) {
    const char* bad[] = {
        "not json",
        "[]",
        R"({"n":1,"m":1,"p":2,"points":[[0]]})",
        R"({"format":"maximin-instance/2","n":1,"m":1,"p":2,"points":[[0]]})",
        R"({"format":"maximin-instance/1","n":1,"m":2,"p":2,"points":[[0]]})",
        R"({"format":"maximin-instance/1","n":2,"m":1,"p":2,"points":[[0]]})",
        R"({"format":"maximin-instance/1","n":1,"m":1,"p":1,"points":[[0]]})",
        R"({"format":"maximin-instance/1","n":1,"m":1,"p":"big","points":[[0]]})",
        R"({"format":"maximin-instance/1","n":1,"m":1,"p":2,"points":[["a"]]})",
        R"({"format":"maximin-instance/1","n":1,"m":1,"p":2,"weights":[-1],"points":[[0]]})",
    };
    for (const char* text : bad) EXPECT_THROW(read_instance(text), std::invalid_argument) << text;
    EXPECT_THROW(load_instance("/nonexistent/instance.json"), std::invalid_argument);
}
