#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>

#include "eulervac/certificate.hpp"
#include "eulervac/field_io.hpp"
#include "eulervac/parallel.hpp"
#include "eulervac/report.hpp"

using namespace eulervac;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / ("eulervac_support_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

class ScopedEnv {
public:
    ScopedEnv(const char* name, const char* value) : name_(name)
    {
        if (const char* old = std::getenv(name)) old_ = old, had_ = true;
        ::setenv(name, value, 1);
    }
    ~ScopedEnv()
    {
        if (had_)
            ::setenv(name_, old_.c_str(), 1);
        else
            ::unsetenv(name_);
    }

private:
    const char* name_;
    std::string old_;
    bool had_ = false;
};

} // namespace

TEST(Format, FullPrecisionRoundTrips)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1e6, 1e6);
    for (int j = 0; j < 1000; ++j) {
        const double v = U(rng) * std::pow(10.0, (j % 40) - 20);
        EXPECT_EQ(std::strtod(fmt_full(v).c_str(), nullptr), v);
    }
    EXPECT_EQ(fmt_full(kInf), "inf");
    EXPECT_EQ(fmt_slope(0.123456789), "0.123457");
    EXPECT_DOUBLE_EQ(round_slope(1.23456789), 1.23457);
    EXPECT_EQ(json_number(std::nan("")), "nan");
}

TEST(FieldIo, WriteReadIsBitExact)
{
    const fs::path d = scratch_dir("field");
    const Grid g{2, 0.0, 3.0, 37, 0.1, 0.9, 5};
    FlowField f = build_field(
        g, [](double t, double r) { return r < 1.0 + t ? std::exp(-r) / 3.0 : 0.0; }, [](double t, double r) { return r / (1.0 + t) + 1e-17; });
    f.exterior_velocity = expansion_velocity(1.0);
    f.space_ext = Extension::constant;
    f.role = Role::strong;
    write_field(f, d / "run.csv");
    EXPECT_TRUE(fs::exists(d / "run.csv.json"));
    const FlowField r = read_field(d / "run.csv");
    EXPECT_TRUE(r.grid.same_as(g));
    EXPECT_EQ(r.rho, f.rho);
    EXPECT_EQ(r.mom, f.mom);
    EXPECT_EQ(r.role, Role::strong);
    EXPECT_EQ(r.space_ext, Extension::constant);
    ASSERT_TRUE(r.exterior_velocity);
    EXPECT_EQ(r.exterior_velocity->name, "expansion");
    EXPECT_EQ((*r.exterior_velocity)(0.5, 3.0), 2.0);
    // a second write of the same field is byte-identical
    write_field(r, d / "again.csv");
    EXPECT_EQ(read_file(d / "run.csv"), read_file(d / "again.csv"));
    EXPECT_EQ(read_file(d / "run.csv.json"), read_file(d / "again.csv.json"));
}

TEST(FieldIo, MalformedInputsAreRejected)
{
    const fs::path d = scratch_dir("bad");
    const Grid g{1, 0.0, 1.0, 8, 0.0, 1.0, 2};
    const FlowField f = build_field(g, [](double) { return 1.0; }, [](double) { return 0.0; });
    EXPECT_THROW(read_field(d / "missing.csv"), Error);
    write_field(f, d / "a.csv");
    fs::remove(d / "a.csv.json");
    EXPECT_THROW(read_field(d / "a.csv"), Error);

    write_field(f, d / "b.csv");
    std::string csv = read_file(d / "b.csv");
    write_atomic(d / "b.csv", csv.substr(0, csv.rfind('\n', csv.size() - 2) + 1));
    EXPECT_THROW(read_field(d / "b.csv"), Error);

    write_field(f, d / "c.csv");
    csv = read_file(d / "c.csv");
    csv.replace(csv.find("1,0"), 3, "x,0");
    write_atomic(d / "c.csv", csv);
    EXPECT_THROW(read_field(d / "c.csv"), Error);

    write_field(f, d / "e.csv");
    csv = read_file(d / "e.csv");
    csv.replace(csv.find(",1,0\n"), 5, ",-1,0\n");
    write_atomic(d / "e.csv", csv);
    EXPECT_THROW(read_field(d / "e.csv"), Error);

    write_field(f, d / "h.csv");
    write_atomic(d / "h.csv.json", "{\"grid\": {\"dim\": 3}}");
    EXPECT_THROW(read_field(d / "h.csv"), Error);
}

TEST(Report, AtomicWriteLeavesNoTemporary)
{
    const fs::path d = scratch_dir("atomic");
    write_atomic(d / "sub" / "x.txt", "one");
    write_atomic(d / "sub" / "x.txt", "two");
    EXPECT_EQ(read_file(d / "sub" / "x.txt"), "two");
    EXPECT_FALSE(fs::exists(d / "sub" / "x.txt.tmp"));
    EXPECT_THROW(read_file(d / "nope"), Error);
}

TEST(Report, CsvTableShape)
{
    CsvTable t({"a", "b"});
    t.add({1.0, 0.1});
    t.add_text({"x", "y"});
    EXPECT_EQ(t.str(), "a,b\n1,0.10000000000000001\nx,y\n");
    EXPECT_EQ(t.size(), 2u);
    EXPECT_THROW(t.add({1.0}), Error);
}

TEST(Report, SvgIsDeterministicAndDropsNonPositiveLogPoints)
{
    const SvgSeries s{"radius", {0.0, 0.5, 1.0}, {1.0, 1.5, 2.0}, false};
    const std::string a = svg_plot("t", "x", "y", {s}, false, false);
    EXPECT_EQ(a, svg_plot("t", "x", "y", {s}, false, false));
    EXPECT_NE(a.find("<polyline"), std::string::npos);
    const std::string b = svg_plot("t", "x", "y", {s}, true, true);
    EXPECT_EQ(std::count(b.begin(), b.end(), ','), std::count(a.begin(), a.end(), ',') - 1);
}

TEST(Parallel, ResultsFollowIndexOrder)
{
    const std::function<double(std::size_t)> fn = [](std::size_t i) { return std::sin(static_cast<double>(i)) * 1e3; };
    const auto serial = parallel_map<double>(200, fn, 1);
    for (int w : {2, 3, 8}) EXPECT_EQ(parallel_map<double>(200, fn, w), serial);
    const std::function<int(std::size_t)> bad = [](std::size_t i) -> int {
        if (i == 17) throw Error("boom");
        return 0;
    };
    EXPECT_THROW(parallel_map<int>(40, bad, 4), Error);
}

TEST(Parallel, WorkerCountHonoursTheEnvironment)
{
    {
        ScopedEnv e("TOOLKIT_THREADS", "1");
        EXPECT_EQ(worker_count(), 1);
    }
    {
        ScopedEnv e("TOOLKIT_THREADS", "0");
        EXPECT_THROW(worker_count(), Error);
    }
    {
        ScopedEnv e("TOOLKIT_THREADS", "two");
        EXPECT_THROW(worker_count(), Error);
    }
    ScopedEnv e("TOOLKIT_THREADS", "100000");
    EXPECT_GE(worker_count(), 1);
}

TEST(Certificate, ValidAndInvalidData)
{
    RegularityCertificate c;
    c.alpha = 0.8;
    c.beta = 0.8;
    c.q = 3.0;
    c.theta = 2.0;
    c.c1 = 5.0;
    c.times = {0.0, 0.5, 1.0};
    c.lambda = {0.0, 1.0, 0.0};
    EXPECT_NO_THROW(c.validate(3.0));
    EXPECT_DOUBLE_EQ(c.lambda_integral(), 0.5);

    auto expect_bad = [](RegularityCertificate r, const std::string& what) {
        try {
            r.validate(3.0);
            ADD_FAILURE() << "accepted: " << what;
        } catch (const Error& e) {
            EXPECT_NE(std::string(e.what()).find(what), std::string::npos) << e.what();
        }
    };
    RegularityCertificate b = c;
    b.alpha = 0.7;
    expect_bad(b, "alpha >= beta");
    b = c;
    b.q = 2.5;
    expect_bad(b, "q >=");
    b = c;
    b.theta = 1.2;
    expect_bad(b, "threshold");
    b = c;
    b.lambda[1] = -0.1;
    expect_bad(b, "nonnegative");
    b = c;
    b.times = {0.0, 0.0, 1.0};
    expect_bad(b, "increase");
    b = c;
    b.c1 = kInf;
    expect_bad(b, "c1");
}
