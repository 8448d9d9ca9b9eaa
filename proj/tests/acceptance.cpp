#include "splitgeo/splitgeo.hpp"
int main() { return 0; }
