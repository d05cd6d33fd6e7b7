#pragma once

#include "noether/bigint.hpp"
#include "noether/certifier.hpp"
#include "noether/cyclotomic.hpp"
#include "noether/hunter.hpp"
#include "noether/ideals.hpp"
#include "noether/lattice.hpp"
#include "noether/matrix.hpp"
#include "noether/numtheory.hpp"
#include "noether/poly.hpp"
#include "noether/reduction.hpp"
