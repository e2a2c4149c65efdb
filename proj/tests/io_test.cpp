#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "support.hpp"

namespace tpds {
namespace {

TEST(T3FormatTest, WritesHeaderAndSlices) {
  Tensor3 t(2, 2, 2);
  t(0, 0, 0) = 1;
  t(0, 1, 0) = 2;
  t(1, 0, 0) = 3;
  t(1, 1, 0) = 4;
  t(0, 0, 1) = 0.1;
  t(1, 1, 1) = -5;
  EXPECT_EQ(to_t3_string(t),
            "t3 2 2 2\n"
            "1 2\n"
            "3 4\n"
            "\n"
            "0.10000000000000001 0\n"
            "0 -5\n");
}

TEST(T3FormatTest, RoundTripIsBitExact) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto t = random_tensor(1 + s % 3, 1 + s % 4, 1 + s % 5, s);
    t(0, 0, 0) = 1e-300;
    EXPECT_EQ(parse_t3(to_t3_string(t)), t);
  }
}

TEST(T3FormatTest, AcceptsCrlfAndComments) {
  const std::string text =
      "# produced elsewhere\r\n"
      "t3 1 2 2\r\n"
      "1.5 -2\r\n"
      "\r\n"
      "# second slice\r\n"
      "3 4e-1\r\n";
  const auto t = parse_t3(text);
  EXPECT_EQ(t.dims(), (Dims{1, 2, 2}));
  EXPECT_EQ(t(0, 1, 0), -2.0);
  EXPECT_EQ(t(0, 1, 1), 0.4);
}

TEST(T3FormatTest, RejectsMalformedInput) {
  EXPECT_THROW(parse_t3(""), ParseError);
  EXPECT_THROW(parse_t3("t4 1 1 1\n1\n"), ParseError);
  EXPECT_THROW(parse_t3("t3 1 1 0\n"), ParseError);
  EXPECT_THROW(parse_t3("t3 1 2 1\n1\n"), ParseError);        // short row
  EXPECT_THROW(parse_t3("t3 1 1 1\nx\n"), ParseError);        // not a number
  EXPECT_THROW(parse_t3("t3 1 1 1\n1\n2\n"), ParseError);     // trailing data
  try {
    parse_t3("t3 2 1 2\n1\n2\n\n3\n");
    FAIL() << "expected ParseError for a truncated file";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("truncated"), std::string::npos) << e.what();
  }
}

TEST(T3FormatTest, FileErrorsNameTheFile) {
  const auto dir = std::filesystem::temp_directory_path() / "tpds_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "bad.t3";
  std::ofstream(path) << "t3 1 1 2\n1\n";
  try {
    load_t3(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.t3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_t3(dir / "missing.t3"), Error);
  const auto t = random_tensor(2, 3, 4, 1);
  save_t3(dir / "ok.t3", t);
  EXPECT_EQ(load_t3(dir / "ok.t3"), t);
  std::filesystem::remove_all(dir);
}

TEST(ReportTest, MachineFormatHasBlockAndCandidateLines) {
  Tensor3 x0 = random_tensor(2, 4, 2, 3);
  x0.slice(1) = x0.slice(0);
  const auto rep = informative_sysid(x0, Method::fourier);
  const auto text = render(rep, ReportFormat::machine);
  EXPECT_NE(text.find("verdict=not_informative\n"), std::string::npos);
  EXPECT_NE(text.find("block 1 rank=0\n"), std::string::npos);

  const auto x = random_tensor(1, 3, 2, 5);
  const auto c = informative_controllability(nullptr, x, 0.5 * x, Method::fourier);
  const auto ctext = render(c, ReportFormat::machine);
  EXPECT_NE(ctext.find("candidate λ="), std::string::npos) << ctext;
  EXPECT_NE(ctext.find("deficient=1 exempt=1 block=1\n"), std::string::npos) << ctext;
  EXPECT_NE(ctext.find("generic_deficient=0"), std::string::npos);
  EXPECT_EQ(format_complex({1.5, -2.0}), "1.5-2i");
}

}  // namespace
}  // namespace tpds
