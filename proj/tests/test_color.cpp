#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "lipread/color.hpp"
#include "lipread/rng.hpp"

using namespace lipread;

TEST_SUITE("color") {

// Reference values computed independently from the CIE definitions at
// 40-digit precision (sRGB companding, D65 white point, 2-degree observer)
// and frozen here.
TEST_CASE("primary and reference colors hit frozen values") {
  const LabPixel white = rgb_to_lab(255, 255, 255);
  CHECK(white.l == doctest::Approx(100.000003867).epsilon(1e-9));
  CHECK(std::abs(white.a) < 1e-4);
  CHECK(std::abs(white.b) < 1e-4);

  const LabPixel black = rgb_to_lab(0, 0, 0);
  CHECK(black.l == 0.0);
  CHECK(black.a == 0.0);
  CHECK(black.b == 0.0);

  const LabPixel red = rgb_to_lab(255, 0, 0);
  CHECK(red.l == doctest::Approx(53.2407941413).epsilon(1e-9));
  CHECK(red.a == doctest::Approx(80.0924595964).epsilon(1e-9));
  CHECK(red.b == doctest::Approx(67.2031965159).epsilon(1e-9));

  const LabPixel green = rgb_to_lab(0, 255, 0);
  CHECK(green.l == doctest::Approx(87.7347223528).epsilon(1e-9));
  CHECK(green.a == doctest::Approx(-86.1827164205).epsilon(1e-9));
  CHECK(green.b == doctest::Approx(83.1793205027).epsilon(1e-9));

  const LabPixel blue = rgb_to_lab(0, 0, 255);
  CHECK(blue.l == doctest::Approx(32.2970109329).epsilon(1e-9));
  CHECK(blue.a == doctest::Approx(79.1875198451).epsilon(1e-9));
  CHECK(blue.b == doctest::Approx(-107.860161754).epsilon(1e-8));
}

TEST_CASE("skin and lip tones separate along the a axis") {
  const LabPixel skin = rgb_to_lab(224, 172, 140);
  const LabPixel lip = rgb_to_lab(180, 60, 70);
  CHECK(skin.a == doctest::Approx(14.8072090028).epsilon(1e-9));
  CHECK(lip.a == doctest::Approx(49.1325833701).epsilon(1e-9));
  CHECK(lip.a - skin.a > 30.0);
}

TEST_CASE("lightness stays in range over the full gamut") {
  Rng rng(41);
  for (int i = 0; i < 2000; ++i) {
    const auto r = static_cast<std::uint8_t>(rng.next_int(256));
    const auto g = static_cast<std::uint8_t>(rng.next_int(256));
    const auto b = static_cast<std::uint8_t>(rng.next_int(256));
    const LabPixel lab = rgb_to_lab(r, g, b);
    REQUIRE(lab.l >= 0.0);
    REQUIRE(lab.l <= 100.0001);
    REQUIRE(std::isfinite(lab.a));
    REQUIRE(std::isfinite(lab.b));
  }
}

TEST_CASE("conversion round-trips 8-bit colors within one unit") {
  Rng rng(43);
  auto check_roundtrip = [](std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const LabPixel lab = rgb_to_lab(r, g, b);
    std::uint8_t r2, g2, b2;
    lab_to_rgb(lab, r2, g2, b2);
    CHECK(std::abs(int(r) - int(r2)) <= 1);
    CHECK(std::abs(int(g) - int(g2)) <= 1);
    CHECK(std::abs(int(b) - int(b2)) <= 1);
  };
  for (int r : {0, 255})
    for (int g : {0, 255})
      for (int b : {0, 255})
        check_roundtrip(static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                        static_cast<std::uint8_t>(b));
  for (int i = 0; i < 500; ++i) {
    check_roundtrip(static_cast<std::uint8_t>(rng.next_int(256)),
                    static_cast<std::uint8_t>(rng.next_int(256)),
                    static_cast<std::uint8_t>(rng.next_int(256)));
  }
}

TEST_CASE("to_lab converts whole frames pixelwise") {
  RasterFrame frame = RasterFrame::filled(3, 2, 10, 20, 30);
  frame.set_pixel(2, 1, 200, 100, 50);
  const LabFrame lab = to_lab(frame);
  CHECK(lab.width == 3);
  CHECK(lab.height == 2);
  const LabPixel direct = rgb_to_lab(200, 100, 50);
  CHECK(lab.at(2, 1).l == direct.l);
  CHECK(lab.at(2, 1).a == direct.a);
  CHECK(lab.at(2, 1).b == direct.b);
  const LabPixel base = rgb_to_lab(10, 20, 30);
  CHECK(lab.at(0, 0).a == base.a);
}

}  // TEST_SUITE(color)
