#include <catch2/catch_amalgamated.hpp>
#include "splitgeo/splitgeo.hpp"
