#include <doctest.h>

TEST_CASE("placeholder extract") { CHECK(true); }
