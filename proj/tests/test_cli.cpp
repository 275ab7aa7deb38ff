#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result ffgsim(const std::string& args, const std::string& env = {})
{
    std::string cmd = env + " '" FFGSIM_PATH "' " + args + " 2>/dev/null";
    Result r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path temp_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("ffgsim_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST(Cli, Phi)
{
    auto r = ffgsim("phi --alpha 0.67");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "3733\n");
    r = ffgsim("phi --alpha 0.49,0.51");
    EXPECT_NE(r.out.find("0.48999999999999999,2546"), std::string::npos);
    EXPECT_NE(r.out.find("0.51000000000000001,2698"), std::string::npos);
}

TEST(Cli, SimulateWritesTraceIntoOutDir)
{
    auto dir = temp_dir("sim");
    auto r = ffgsim("simulate --scenario '" FFG_SCENARIO_DIR "/offline67.cfg' --seed 1 --out trace.csv",
                    "FFGSIM_OUT_DIR='" + dir.string() + "'");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("3733 epochs"), std::string::npos);
    auto text = slurp(dir / "trace.csv");
    EXPECT_NE(text.find("# seed 1"), std::string::npos);
    EXPECT_NE(text.find("kind=finalized"), std::string::npos);
    // Same seed, same bytes.
    ffgsim("simulate --scenario '" FFG_SCENARIO_DIR "/offline67.cfg' --seed 1 --out '" + (dir / "again.csv").string() +
           "'");
    EXPECT_EQ(slurp(dir / "again.csv"), text);
}

TEST(Cli, OtherSubcommands)
{
    auto r = ffgsim("race --n1 3 --n2 3733 --mu 0.004");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find(",0.99995950"), std::string::npos);
    r = ffgsim("gas");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0.0071"), std::string::npos);
    r = ffgsim("tables --alpha 0.2 --mu 1 --rho 1e-6");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("swing_voter,"), std::string::npos);
    r = ffgsim("wc --alpha 0.65");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "863\n");
    r = ffgsim("sweep --kind offline --alphas 0.1:0.2:0.05");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0.14999999999999999"), std::string::npos);
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(ffgsim("").code, 1);
    EXPECT_EQ(ffgsim("phi").code, 1);
    EXPECT_EQ(ffgsim("phi --alpha abc").code, 1);
    EXPECT_EQ(ffgsim("phi --alpha 1.5").code, 1);
    EXPECT_EQ(ffgsim("race --n1 0 --n2 3 --mu 0.5").code, 1);
    EXPECT_EQ(ffgsim("simulate --scenario /nonexistent.cfg").code, 2);
    auto dir = temp_dir("bad");
    std::ofstream(dir / "bad.cfg") << "seed = 1\nvalidator.a = deposit=1 strategy=nope\n";
    EXPECT_EQ(ffgsim("simulate --scenario '" + (dir / "bad.cfg").string() + "'").code, 2);
    EXPECT_EQ(ffgsim("--version").code, 0);
    EXPECT_EQ(ffgsim("--help").code, 0);
}
