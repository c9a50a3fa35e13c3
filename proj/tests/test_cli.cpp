#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "smoothmax/cli/commands.hpp"
#include "smoothmax/cli/io.hpp"
#include "smoothmax/meb.hpp"

namespace smoothmax::cli {
namespace {

namespace fs = std::filesystem;
using json   = nlohmann::ordered_json;

struct Outcome {
    int         code = -1;
    std::string out;
    std::string err;
};

Outcome run_in_process(std::vector<std::string> args) {
    args.insert(args.begin(), "smoothmax");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int          code = run_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

int run_binary(const std::string& args) {
    const std::string command = std::string(SMOOTHMAX_BINARY) + " " + args + " >/dev/null 2>&1";
    const int         status  = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class TempDir {
  public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("smoothmax_cli_" + std::to_string(::getpid()) + "_" +
                                             ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }

    std::string write(const std::string& name, const std::string& content) const {
        const fs::path file = path_ / name;
        std::ofstream(file, std::ios::binary) << content;
        return file.string();
    }
    std::string path(const std::string& name) const { return (path_ / name).string(); }

  private:
    fs::path path_;
};

std::string read_file(const std::string& path) {
    std::ifstream      in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void drop_wall_times(json& j) {
    if (j.is_object()) {
        j.erase("wall_time_ms");
        for (auto& [key, value] : j.items()) {
            drop_wall_times(value);
        }
    } else if (j.is_array()) {
        for (auto& value : j) {
            drop_wall_times(value);
        }
    }
}

TEST(ParsePointsCsv, Examples) {
    const PointCloud three = parse_points_csv("0,0\n1,0\n0,3\n");
    EXPECT_EQ(three.size(), 3u);
    EXPECT_EQ(three.dim(), 2u);
    EXPECT_EQ(three.point(2)[1], 3.0);

    const PointCloud header = parse_points_csv("x,y\n1,2\n");
    EXPECT_EQ(header.size(), 1u);
    EXPECT_EQ(header.dim(), 2u);

    try {
        parse_points_csv("1,2\n3\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(ParsePointsCsv, NonNumericCellReportsLineAndColumn) {
    try {
        parse_points_csv("1,2\n3,abc\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.column(), 2u);
    }
    EXPECT_THROW(parse_points_csv("1,2\n3,nan\n"), ParseError);
    EXPECT_THROW(parse_points_csv("1,2\n3,inf\n"), ParseError);
    EXPECT_THROW(parse_points_csv("1,2\nx,y\n"), ParseError);
}

TEST(ParsePointsCsv, EmptyInput) {
    EXPECT_THROW(parse_points_csv(""), EmptyInputError);
    EXPECT_THROW(parse_points_csv("\n\n"), EmptyInputError);
    EXPECT_THROW(parse_points_csv("x,y\n"), EmptyInputError);
}

TEST(ParsePointsCsv, WhitespaceCrlfAndBlankLines) {
    const PointCloud cloud = parse_points_csv(" 1 , +2.5 \r\n\r\n-3e1,4\r\n");
    EXPECT_EQ(cloud.size(), 2u);
    EXPECT_EQ(cloud.point(0)[1], 2.5);
    EXPECT_EQ(cloud.point(1)[0], -30.0);
    const PointCloud no_newline = parse_points_csv("5");
    EXPECT_EQ(no_newline.size(), 1u);
}

TEST(ReadPointsCsv, MissingFile) {
    EXPECT_THROW(read_points_csv("/nonexistent/points.csv"), InputError);
}

TEST(Algorithm, Names) {
    for (Algorithm a : {Algorithm::smooth, Algorithm::coreset, Algorithm::exact}) {
        EXPECT_EQ(parse_algorithm(to_string(a)), a);
    }
    EXPECT_THROW(parse_algorithm("fast"), ContractViolation);
}

TEST(Solve, ExactTwoPoints) {
    TempDir    dir;
    const auto input = dir.write("two.csv", "0\n2\n");
    const Outcome r = run_in_process({"solve", "--input", input, "--algorithm", "exact"});
    ASSERT_EQ(r.code, exit_code::ok) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["radius"].get<double>(), 1.0);
    EXPECT_EQ(j["center"], json::array({1.0}));
    EXPECT_EQ(j["n"], 2);
    EXPECT_EQ(j["d"], 1);
    EXPECT_FALSE(j.contains("constants"));
}

TEST(Solve, SmoothTwoPoints) {
    TempDir    dir;
    const auto input = dir.write("two.csv", "0\n2\n");
    const Outcome r = run_in_process({"solve", "--input", input, "--algorithm", "smooth", "--epsilon", "0.01"});
    ASSERT_EQ(r.code, exit_code::ok) << r.err;
    const json j = json::parse(r.out);
    EXPECT_LE(j["radius"].get<double>(), 1.01);
    for (const char* key : {"s", "L_s", "U_s", "kappa_s", "G_s"}) {
        EXPECT_TRUE(j["constants"].contains(key)) << key;
    }
    const std::vector<std::string> keys{"algorithm", "n",          "d",
                                        "epsilon",   "center",     "radius",
                                        "iterations", "planned_iterations", "wall_time_ms",
                                        "constants"};
    std::vector<std::string> actual;
    for (const auto& [key, value] : j.items()) {
        actual.push_back(key);
    }
    EXPECT_EQ(actual, keys);
}

TEST(Solve, CoresetVerifiedAgainstExact) {
    TempDir            dir;
    std::ostringstream csv;
    csv << "x,y,z\n";
    const PointCloud cloud = testkit::random_point_cloud(5, {150, 3, testkit::Distribution::clustered});
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        csv << cloud.point(i)[0] << ',' << cloud.point(i)[1] << ',' << cloud.point(i)[2] << '\n';
    }
    const auto input = dir.write("cloud.csv", csv.str());
    const Outcome r = run_in_process({"solve", "--input", input, "--algorithm", "coreset", "--epsilon", "0.1", "--verify"});
    ASSERT_EQ(r.code, exit_code::ok) << r.err;
    const json j = json::parse(r.out);
    EXPECT_TRUE(j["verification"]["passed"].get<bool>());
    EXPECT_LE(j["radius"].get<double>(), 1.1 * j["verification"]["exact_radius"].get<double>());
}

TEST(Solve, TraceAndOutputFiles) {
    TempDir    dir;
    const auto input = dir.write("tri.csv", "0,0\n1,0\n0.5,0.8\n");
    const Outcome r = run_in_process({"solve", "--input", input, "--epsilon", "0.2", "--output", dir.path("out.json"),
                                       "--trace", dir.path("trace.csv")});
    ASSERT_EQ(r.code, exit_code::ok) << r.err;
    EXPECT_TRUE(r.out.empty());
    const json        j     = json::parse(read_file(dir.path("out.json")));
    const std::string trace = read_file(dir.path("trace.csv"));
    std::istringstream lines(trace);
    std::string        line;
    std::getline(lines, line);
    EXPECT_EQ(line, "t,smooth_value,gradient_norm");
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        EXPECT_EQ(line.substr(0, line.find(',')), std::to_string(rows));
    }
    EXPECT_EQ(rows, j["iterations"].get<std::size_t>());
}

TEST(Solve, TraceRequiresSmooth) {
    TempDir    dir;
    const auto input = dir.write("two.csv", "0\n2\n");
    const Outcome r = run_in_process({"solve", "--input", input, "--algorithm", "exact", "--trace", dir.path("t.csv")});
    EXPECT_EQ(r.code, exit_code::bad_flags);
}

TEST(Solve, ExitCodes) {
    TempDir    dir;
    const auto good   = dir.write("good.csv", "0,0\n1,1\n");
    const auto ragged = dir.write("ragged.csv", "1,2\n3\n");
    const auto empty  = dir.write("empty.csv", "");
    const auto high   = dir.write("high.csv", "0,0,0,0,0,0,0,0,0,0,0,0,0\n1,0,0,0,0,0,0,0,0,0,0,0,0\n");
    EXPECT_EQ(run_in_process({"solve", "--input", good}).code, exit_code::ok);
    EXPECT_EQ(run_in_process({"solve", "--input", good, "--epsilon", "0"}).code, exit_code::bad_flags);
    EXPECT_EQ(run_in_process({"solve", "--input", good, "--epsilon", "1.5"}).code, exit_code::bad_flags);
    EXPECT_EQ(run_in_process({"solve", "--input", good, "--epsilon", "abc"}).code, exit_code::bad_flags);
    EXPECT_EQ(run_in_process({"solve", "--input", good, "--algorithm", "magic"}).code, exit_code::bad_flags);
    EXPECT_EQ(run_in_process({"solve"}).code, exit_code::bad_flags);
    EXPECT_EQ(run_in_process({"solve", "--input", good, "--bogus"}).code, exit_code::bad_flags);
    EXPECT_EQ(run_in_process({}).code, exit_code::bad_flags);
    EXPECT_EQ(run_in_process({"solve", "--input", ragged}).code, exit_code::parse_error);
    EXPECT_EQ(run_in_process({"solve", "--input", empty}).code, exit_code::parse_error);
    EXPECT_EQ(run_in_process({"solve", "--input", dir.path("missing.csv")}).code, exit_code::parse_error);
    EXPECT_EQ(run_in_process({"solve", "--input", high, "--algorithm", "exact"}).code, exit_code::solver_error);
    EXPECT_EQ(run_in_process({"solve", "--input", high, "--verify"}).code, exit_code::solver_error);
    EXPECT_EQ(run_in_process({"--help"}).code, exit_code::ok);
    EXPECT_FALSE(run_in_process({"solve", "--input", ragged}).err.empty());
}

TEST(Bench, PlannedRatiosAndCsv) {
    const Outcome smooth = run_in_process({"bench", "--n", "200", "--dim", "3", "--epsilons", "0.2,0.05", "--algorithms",
                                       "smooth"});
    ASSERT_EQ(smooth.code, exit_code::ok) << smooth.err;
    const json s     = json::parse(smooth.out);
    const auto rows  = s["rows"];
    ASSERT_EQ(rows.size(), 2u);
    const double ratio =
        rows[1]["planned_iterations"].get<double>() / rows[0]["planned_iterations"].get<double>();
    EXPECT_GT(ratio, 2.0);
    EXPECT_LT(ratio, 3.0);
    EXPECT_EQ(rows[0]["formula_iterations"], required_iterations_meb(0.2, 200));
    for (const auto& row : rows) {
        EXPECT_GE(row["radius_over_exact"].get<double>(), 1.0 - 1e-9);
        EXPECT_LE(row["radius_over_exact"].get<double>(), 1.0 + row["epsilon"].get<double>());
        EXPECT_TRUE(row["observed_iterations"].is_number());
        EXPECT_LE(row["observed_iterations"].get<std::size_t>(), row["iterations"].get<std::size_t>());
    }

    const Outcome coreset = run_in_process({"bench", "--n", "200", "--dim", "3", "--epsilons", "0.2,0.05",
                                        "--algorithms", "coreset"});
    const json c      = json::parse(coreset.out);
    EXPECT_EQ(c["rows"][1]["iterations"].get<double>() / c["rows"][0]["iterations"].get<double>(), 16.0);

    const Outcome csv = run_in_process({"bench", "--n", "100", "--epsilons", "0.2,0.1,0.05", "--algorithms",
                                    "smooth,coreset,exact", "--format", "csv"});
    ASSERT_EQ(csv.code, exit_code::ok) << csv.err;
    std::istringstream lines(csv.out);
    std::string        line;
    std::size_t        count = 0;
    std::getline(lines, line);
    EXPECT_EQ(line.rfind("algorithm,epsilon,iterations,", 0), 0u);
    while (std::getline(lines, line)) {
        ++count;
    }
    EXPECT_EQ(count, 9u);
}

TEST(Bench, HighDimensionUsesCoresetReference) {
    const Outcome r = run_in_process({"bench", "--n", "50", "--dim", "14", "--epsilons", "0.2", "--algorithms", "smooth"});
    ASSERT_EQ(r.code, exit_code::ok) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["reference"], "coreset_1e-3");
    EXPECT_TRUE(j["exact_radius"].is_null());
    EXPECT_TRUE(j["rows"][0]["radius_over_exact"].is_null());
}

TEST(Bench, FlagValidation) {
    EXPECT_EQ(run_in_process({"bench", "--epsilons", "0.2,x"}).code, exit_code::bad_flags);
    EXPECT_EQ(run_in_process({"bench", "--epsilons", "0"}).code, exit_code::bad_flags);
    EXPECT_EQ(run_in_process({"bench", "--algorithms", "smooth,bogus"}).code, exit_code::bad_flags);
    EXPECT_EQ(run_in_process({"bench", "--distribution", "uniform"}).code, exit_code::bad_flags);
    EXPECT_EQ(run_in_process({"bench", "--format", "xml"}).code, exit_code::bad_flags);
    EXPECT_EQ(run_in_process({"bench", "--n", "0"}).code, exit_code::bad_flags);
}

TEST(Bench, DeterministicJsonApartFromWallTime) {
    const std::vector<std::string> args{"bench", "--n", "300", "--dim", "4", "--distribution", "clustered",
                                        "--seed", "7", "--epsilons", "0.2,0.1"};
    json a = json::parse(run_in_process(args).out);
    json b = json::parse(run_in_process(args).out);
    drop_wall_times(a);
    drop_wall_times(b);
    EXPECT_EQ(a.dump(), b.dump());
}

TEST(Bench, LoglogSlope) {
    EXPECT_NEAR(loglog_slope({0.1, 0.01}, {10.0, 100.0}), 1.0, 1e-12);
    EXPECT_NEAR(loglog_slope({0.2, 0.1, 0.05}, {25.0, 100.0, 400.0}), 2.0, 1e-12);
    EXPECT_THROW(loglog_slope({0.1}, {1.0}), ContractViolation);
    EXPECT_THROW(loglog_slope({0.1, 0.1}, {1.0, 2.0}), ContractViolation);
}

TEST(Gradcheck, ExitCodes) {
    const Outcome defaults = run_in_process({"gradcheck"});
    EXPECT_EQ(defaults.code, exit_code::ok) << defaults.err;
    EXPECT_NE(defaults.out.find("gradient max relative error"), std::string::npos);
    EXPECT_EQ(run_in_process({"gradcheck", "--smoother", "1e6"}).code, exit_code::ok);
    EXPECT_EQ(run_in_process({"gradcheck", "--trials", "0"}).code, exit_code::bad_flags);
    EXPECT_EQ(run_in_process({"gradcheck", "--smoother", "-1"}).code, exit_code::bad_flags);
}

TEST(Gradcheck, SummaryTolerances) {
    GradcheckSummary summary;
    EXPECT_TRUE(summary.passed());
    summary.worst_hessian_error = 2e-4;
    EXPECT_FALSE(summary.passed());
}

TEST(Subprocess, ExitCodesMatchDocumentation) {
    TempDir    dir;
    const auto good   = dir.write("good.csv", "0\n2\n");
    const auto ragged = dir.write("ragged.csv", "1,2\n3\n");
    const auto high   = dir.write("high.csv", "0,0,0,0,0,0,0,0,0,0,0,0,0\n1,0,0,0,0,0,0,0,0,0,0,0,0\n");
    EXPECT_EQ(run_binary("--help"), 0);
    EXPECT_EQ(run_binary("solve --input " + good + " --algorithm exact"), 0);
    EXPECT_EQ(run_binary("solve --input " + good + " --epsilon 2"), 2);
    EXPECT_EQ(run_binary("frobnicate"), 2);
    EXPECT_EQ(run_binary("solve --input " + ragged), 3);
    EXPECT_EQ(run_binary("solve --input " + high + " --algorithm exact"), 4);
    EXPECT_EQ(run_binary("gradcheck --trials 3"), 0);
    EXPECT_EQ(run_binary("gradcheck --trials 0"), 2);
}

TEST(Subprocess, BenchOutputIsByteIdenticalApartFromWallTime) {
    TempDir           dir;
    const std::string args = "bench --n 200 --dim 3 --seed 3 --epsilons 0.2,0.1 --output ";
    ASSERT_EQ(run_binary(args + dir.path("a.json")), 0);
    ASSERT_EQ(run_binary(args + dir.path("b.json")), 0);
    json a = json::parse(read_file(dir.path("a.json")));
    json b = json::parse(read_file(dir.path("b.json")));
    drop_wall_times(a);
    drop_wall_times(b);
    EXPECT_EQ(a.dump(2), b.dump(2));
}

}  // namespace
}  // namespace smoothmax::cli
