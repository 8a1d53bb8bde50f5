#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "bnlab/config.hpp"
#include "bnlab/errors.hpp"

using namespace bnlab;
using nlohmann::json;

TEST_CASE("defaults round-trip") {
  Config c = default_config();
  CHECK(c.tolerances.prefactor == 0.10);
  CHECK(c.tail_for(3).per_decade == 20);
  Config d = config_from_json(config_to_json(c));
  CHECK(config_to_json(d) == config_to_json(c));
  CHECK_THROWS_AS(c.tail_for(7), Error);
}

TEST_CASE("overrides and unknown keys") {
  Config c = config_from_json(json::parse(R"({"tolerances": {"prefactor": 0.2}, "tail": {"5": {"per_decade": 8}}})"));
  CHECK(c.tolerances.prefactor == 0.2);
  CHECK(c.tail_for(5).per_decade == 8);
  CHECK(c.tail_for(5).a_min == default_config().tail_for(5).a_min);

  auto kind = [](const char* text) {
    try {
      config_from_json(json::parse(text));
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  CHECK(kind(R"({"tolerence": {}})") == ErrorKind::ConfigError);
  CHECK(kind(R"({"tolerances": {"prefactr": 0.1}})") == ErrorKind::ConfigError);
  CHECK(kind(R"({"jobs": 0})") == ErrorKind::ConfigError);
  CHECK(kind(R"({"jobs": 1.5})") == ErrorKind::ConfigError);
}

TEST_CASE("config file and environment") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "bnlab_config_test";
  fs::create_directories(dir);
  const auto a = dir / "a.json", b = dir / "b.json";
  std::ofstream(a) << R"({"jobs": 3})";
  std::ofstream(b) << R"({"jobs": 5})";
  ::unsetenv("BN_CONFIG");
  CHECK(load_config().jobs == 1);
  CHECK(load_config(a.string()).jobs == 3);
  ::setenv("BN_CONFIG", b.c_str(), 1);
  CHECK(load_config(a.string()).jobs == 5);
  ::unsetenv("BN_CONFIG");
  CHECK_THROWS_AS(load_config((dir / "missing.json").string()), Error);
  fs::remove_all(dir);
}
