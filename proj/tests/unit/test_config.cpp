#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "mslab/config.hpp"

using namespace mslab;

namespace {

ConfigError parse_error(const std::string& text) {
  try {
    RunConfig::parse(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for: " << text;
  return ConfigError("", 0, 0, "");
}

}  // namespace

TEST(Config, ParseAndSerialize) {
  const RunConfig c = RunConfig::parse(
      "# header\n"
      "experiment = backward\n"
      "run.n = 512   # trailing\n"
      "label = \"two words # kept\"\n"
      "ensemble.solitons[0].v = [1.5, -0.5]\n"
      "ensemble.solitons[1].v = [ ]\n");
  EXPECT_EQ(c.experiment(), "backward");
  EXPECT_EQ(c.get_int("run.n"), 512);
  EXPECT_EQ(c.get_string("label"), "two words # kept");
  EXPECT_EQ(c.get_doubles("ensemble.solitons[0].v"), (std::vector<double>{1.5, -0.5}));
  EXPECT_TRUE(c.get_doubles("ensemble.solitons[1].v").empty());
  EXPECT_EQ(c.values().at("run.n").line, 3);
  const RunConfig again = RunConfig::parse(c.serialize());
  EXPECT_EQ(again, c);
  EXPECT_EQ(again.serialize(), c.serialize());
  EXPECT_EQ(again.hash(), c.hash());
  EXPECT_EQ(c.hash().size(), 16u);
}

TEST(Config, HashIgnoresLayout) {
  const RunConfig a = RunConfig::parse("b = 2\na = 1\n");
  const RunConfig b = RunConfig::parse("# c\na=1\n\nb   =   2\n");
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), RunConfig::parse("a = 1\nb = 3\n").hash());
}

TEST(Config, Fnv1a) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Config, ErrorsCarryPosition) {
  auto e = parse_error("a = 1\nb 2\n");
  EXPECT_EQ(e.line(), 2);
  e = parse_error("a = 1\na = 2\n");
  EXPECT_EQ(e.line(), 2);
  EXPECT_EQ(e.key(), "a");
  EXPECT_NE(std::string(e.what()).find("duplicate"), std::string::npos);
  e = parse_error("x = \"open\n");
  EXPECT_EQ(e.line(), 1);
  e = parse_error("ok = 1\n  9bad = 1\n");
  EXPECT_EQ(e.line(), 2);
  EXPECT_EQ(e.column(), 3);
  parse_error("l = [1, , 2]\n");
  parse_error("l = 1, 2\n");
  parse_error("p.file = /definitely/not/here.txt\n");
}

TEST(Config, FileKeysResolveAgainstBase) {
  const auto dir = std::filesystem::temp_directory_path() / "mslab_cfg_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "mode.txt") << "x";
  EXPECT_NO_THROW(RunConfig::parse("mode.file = mode.txt\n", dir));
  EXPECT_THROW(RunConfig::parse("mode.file = mode.txt\n", dir / "sub"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(Config, TypedGettersNameTheKey) {
  const RunConfig c = RunConfig::parse("run.n = 7\nrun.box = abc\nflag = on\nx = 1e400\n");
  EXPECT_TRUE(c.get_bool("flag", false));
  EXPECT_FALSE(c.get_bool("missing", false));
  EXPECT_EQ(c.get_double("missing", 2.5), 2.5);
  try {
    c.get_int("run.n", 8, 8, 8192);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "run.n");
    EXPECT_EQ(e.line(), 1);
    EXPECT_NE(std::string(e.what()).find("outside"), std::string::npos);
  }
  EXPECT_THROW(c.get_double("run.box"), ConfigError);
  EXPECT_THROW(c.get_double("x"), ConfigError);
  EXPECT_THROW(c.get_string("nope"), ConfigError);
}

TEST(Config, IndexedGroupsAndEditing) {
  RunConfig c = RunConfig::parse("s[0].a = 1\ns[1].a = 2\ns[2].b = 3\nt[1].a = 1\n");
  EXPECT_EQ(c.count_indexed("s"), 3u);
  EXPECT_EQ(c.count_indexed("t"), 0u);
  c.set("s[3].a", 0.25);
  EXPECT_EQ(c.count_indexed("s"), 4u);
  EXPECT_EQ(c.get_string("s[3].a"), "0.25");
  c.set_list("v", {"1", "2"});
  EXPECT_EQ(c.get_doubles("v").size(), 2u);
  EXPECT_THROW(c.set("bad key", 1.0), ConfigError);
}

TEST(Config, OutputDirOverride) {
  const RunConfig c = RunConfig::parse("output_dir = results\n");
  ::unsetenv("OUTPUT_DIR");
  EXPECT_EQ(c.output_dir(), std::filesystem::path("results"));
  ::setenv("OUTPUT_DIR", "/tmp/elsewhere", 1);
  EXPECT_EQ(c.output_dir(), std::filesystem::path("/tmp/elsewhere"));
  ::unsetenv("OUTPUT_DIR");
  EXPECT_EQ(RunConfig::parse("").output_dir(), std::filesystem::path("out"));
}

TEST(Config, FormatNumber) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(3.0), "3");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}
