#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace morrey;

namespace {

std::string archive_text(const ScalarField& f, const ArchiveHeader& h) {
  std::ostringstream os;
  ArchiveHeader full = h;
  full.n = f.grid().dim();
  full.ell = f.grid().ell();
  full.k = f.grid().k();
  write_archive(os, full, f);
  return os.str();
}

}  // namespace

TEST(Archive, RoundTripIsBitExact) {
  const auto dir = fixtures::scratch_dir("archive");
  for (int n : {1, 2}) {
    ScalarField f = fixtures::random_field(make_grid(n, 2, 3), 17);
    f.values()[0] = 1.0 / 3.0;
    ArchiveHeader h;
    h.p = 4.5;
    h.iteration = 1234;
    h.energy = 0.1;
    h.tau = 3e-7;
    const auto path = dir / ("f" + std::to_string(n) + ".txt");
    const FieldArchive saved = save_field(f, path, h);
    const FieldArchive loaded = load_archive(path);
    EXPECT_EQ(loaded.field, f);
    EXPECT_EQ(loaded.header, saved.header);
  }
}

TEST(Archive, AppendixGridReconstructed) {
  const Grid g = make_grid(2, 6, 10);
  std::istringstream is(archive_text(ScalarField(g), {}));
  const FieldArchive a = read_archive(is);
  EXPECT_EQ(a.field.grid(), g);
  EXPECT_EQ(a.field.grid().nodes_per_axis(), 121);
}

TEST(Archive, CorruptedHeaderIsShapeMismatch) {
  std::string text = archive_text(ScalarField(make_grid(2, 2, 2)), {});
  text.replace(text.find("k 2"), 3, "k 3");
  std::istringstream is(text);
  try {
    read_archive(is);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("shape mismatch"), std::string::npos);
  }
}

TEST(Archive, RejectsMalformedInput) {
  const std::string good = archive_text(ScalarField(make_grid(1, 2, 1)), {});
  auto fails = [](const std::string& s) {
    std::istringstream is(s);
    EXPECT_THROW(read_archive(is), FormatError) << s;
  };
  fails("");
  fails("other-format 1\n");
  fails("morrey-field 9\n");
  fails(good + "0.5\n");
  fails(good.substr(0, good.rfind("0\n")));
  std::string bad_value = good;
  bad_value.replace(bad_value.rfind('0'), 1, "zz");
  fails(bad_value);
  std::string unknown = good;
  unknown.insert(unknown.find('\n') + 1, "colour blue\n");
  fails(unknown);
}

TEST(Archive, MissingFileIsIoError) {
  EXPECT_THROW(load_archive("/nonexistent/dir/field.txt"), IoError);
  EXPECT_THROW(save_field(ScalarField(make_grid(1, 2, 1)), "/nonexistent/dir/f.txt", {}), IoError);
}
