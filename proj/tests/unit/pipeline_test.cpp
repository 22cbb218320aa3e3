// Pipeline command tests land together with the pipeline implementation.
#include "doctest.h"

TEST_CASE("pipeline placeholder") { CHECK(true); }
