// End-to-end checks of the command line surface: each test shells out to the
// built binary (path in TREEPCA_BIN) inside a scratch directory.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <catch_amalgamated.hpp>

#include "testutil.hpp"
#include "treepca/io.hpp"

namespace fs = std::filesystem;

namespace {

std::string bin() {
    const char* path = std::getenv("TREEPCA_BIN");
    REQUIRE(path != nullptr);
    return path;
}

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / ("treepca_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args) {
    std::string cmd = bin() + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string write_toy(const Scratch& s) {
    std::string path = s.file("toy.jsonl");
    treepca::write_dataset(testutil::toy_dataset(), path);
    return path;
}

} // namespace

TEST_CASE("pca subcommand emits the worked forward decomposition") {
    Scratch s;
    std::string in = write_toy(s);
    std::string out = s.file("pca.csv");
    REQUIRE(run("pca --in " + in + " --direction forward --start intersection --out " + out) == 0);
    CHECK(slurp(out) ==
          "index,leaf,weight_sum,path\n"
          "1,r.0.1,4,r;r.0;r.0.1\n"
          "2,r.2.0,3,r;r.2;r.2.0\n"
          "3,r.1.0,2,r;r.1;r.1.0\n"
          "4,r.1.1,2,r;r.1;r.1.1\n"
          "5,r.0.0,1,r;r.0;r.0.0\n"
          "6,r.2.1,1,r;r.2;r.2.1\n");
    auto sidecar = nlohmann::json::parse(slurp(out + ".json"));
    CHECK(sidecar["direction"] == "forward");
    CHECK(sidecar["n"] == 6);

    // backward with the flipped pairing stores the same positions
    std::string out2 = s.file("pca_b.csv");
    REQUIRE(run("pca --in " + in + " --direction backward --start intersection --out " + out2) == 0);
    CHECK(slurp(out2) == slurp(out));
}

TEST_CASE("tiebreak right flips the tied selections but keeps the pairing") {
    Scratch s;
    std::string in = write_toy(s);
    std::string fwd = s.file("right.csv"), bwd = s.file("right_b.csv");
    REQUIRE(run("pca --in " + in +
                " --direction forward --start intersection --tiebreak right --out " + fwd) == 0);
    CHECK(slurp(fwd) ==
          "index,leaf,weight_sum,path\n"
          "1,r.0.1,4,r;r.0;r.0.1\n"
          "2,r.2.1,3,r;r.2;r.2.1\n"
          "3,r.1.1,2,r;r.1;r.1.1\n"
          "4,r.1.0,2,r;r.1;r.1.0\n"
          "5,r.2.0,1,r;r.2;r.2.0\n"
          "6,r.0.0,1,r;r.0;r.0.0\n");
    REQUIRE(run("pca --in " + in +
                " --direction backward --start intersection --tiebreak right --out " + bwd) == 0);
    CHECK(slurp(bwd) == slurp(fwd));
}

TEST_CASE("support and intersect write tree files usable as --start") {
    Scratch s;
    std::string in = write_toy(s);
    std::string sup = s.file("sup.txt"), inter = s.file("int.txt");
    REQUIRE(run("support --in " + in + " --out " + sup) == 0);
    REQUIRE(run("intersect --in " + in + " --out " + inter) == 0);
    CHECK(slurp(inter) == "r\nr.1\n");
    CHECK(slurp(sup) == "r\nr.0\nr.0.0\nr.0.1\nr.1\nr.1.0\nr.1.1\nr.2\nr.2.0\nr.2.1\n");

    std::string out = s.file("pca.csv");
    REQUIRE(run("pca --in " + in + " --direction forward --start file:" + inter + " --out " + out) ==
            0);
    CHECK(slurp(out).find("1,r.0.1,4,") != std::string::npos);
}

TEST_CASE("curve, regress, split and layout emit their schemas") {
    Scratch s;
    std::string in = write_toy(s);

    std::string curve = s.file("curve.csv");
    REQUIRE(run("curve --in " + in + " --start intersection --out " + curve) == 0);
    CHECK(slurp(curve) ==
          "removed,explained\n0,19\n1,18\n2,17\n3,15\n4,13\n5,10\n6,6\n");

    std::string scaled = s.file("scaled.csv");
    REQUIRE(run("curve --in " + in + " --start intersection --out " + scaled + " --scaled") == 0);
    CHECK(slurp(scaled).rfind("removed,explained\n0,100\n", 0) == 0);

    std::string pvals = s.file("p.csv");
    REQUIRE(run("regress --in " + in + " --covariate age --start intersection --out " + pvals) == 0);
    CHECK(slurp(pvals).rfind("removed,p_value\n", 0) == 0);
    CHECK(slurp(pvals).find("\n6,1\n") != std::string::npos);

    std::string split = s.file("split.csv");
    REQUIRE(run("split --in " + in + " --fraction 0.75 --out " + split) == 0);
    CHECK(slurp(split).rfind("tree_id,x,y\n", 0) == 0);
    auto sidecar = nlohmann::json::parse(slurp(split + ".json"));
    CHECK(sidecar["set1_leaves"].size() + sidecar["set2_leaves"].size() == 6);

    std::string layout = s.file("layout.csv");
    REQUIRE(run("layout --in " + in + " --tree-id t1 --out " + layout) == 0);
    CHECK(slurp(layout).rfind("node,radius,angle_deg\nr,0,0\n", 0) == 0);

    std::string svg = s.file("layout.svg");
    REQUIRE(run("layout --in " + in + " --tree-id t1 --out " + svg) == 0);
    CHECK(slurp(svg).rfind("<svg", 0) == 0);
}

TEST_CASE("verify passes on the toy dataset") {
    Scratch s;
    std::string in = write_toy(s);
    CHECK(run("verify --in " + in + " --start intersection") == 0);
    CHECK(run("verify --in " + in + " --start root") == 0);
}

TEST_CASE("gen is reproducible byte for byte") {
    Scratch s;
    std::string a = s.file("a.jsonl"), b = s.file("b.jsonl");
    std::string flags = "gen --seed 42 --trees 30 --depth 5 --arity 2 --base-keep 0.85 --effect 0.3";
    REQUIRE(run(flags + " --out " + a) == 0);
    REQUIRE(run(flags + " --out " + b) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(treepca::read_dataset(a).size() == 30);
}

TEST_CASE("relabel converts parenthesis trees into a dataset") {
    Scratch s;
    std::string parens = s.file("trees.txt");
    {
        std::ofstream out(parens);
        out << "(()(()))\n((())())\n";
    }
    std::string out = s.file("relabel.jsonl");
    REQUIRE(run("relabel --in " + parens + " --scheme descendant --out " + out) == 0);
    treepca::DataSet ds = treepca::read_dataset(out);
    REQUIRE(ds.size() == 2);
    // both inputs normalize to the same labeled tree
    CHECK(ds.trees()[0] == ds.trees()[1]);
    CHECK(ds.trees()[0] == testutil::tree({"r", "r.0", "r.0.0", "r.1"}));
}

TEST_CASE("validation failures exit with code 1 and unknown flags print usage") {
    Scratch s;
    std::string in = write_toy(s);
    CHECK(run("pca --in " + in + " --direction sideways --start root --out " + s.file("x.csv")) ==
          1);
    CHECK(run("pca --in " + s.file("missing.jsonl") +
              " --direction forward --out " + s.file("x.csv")) == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("--help") == 0);

    std::string bad = s.file("bad.jsonl");
    {
        std::ofstream outf(bad);
        outf << "{\"id\":\"a\",\"nodes\":[\"r\",\"r.0.1\"]}\n";
    }
    CHECK(run("support --in " + bad) == 1);
}
