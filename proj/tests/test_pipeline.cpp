#include <doctest.h>

TEST_CASE("placeholder pipeline") { CHECK(true); }
