#pragma once

#include "gallery/rational.hpp"
#include "gallery/geometry.hpp"
#include "gallery/polygon.hpp"
#include "gallery/perturb.hpp"
#include "gallery/visibility.hpp"
#include "gallery/lattice.hpp"
#include "gallery/arrangement.hpp"
#include "gallery/bitset.hpp"
#include "gallery/coverage.hpp"
#include "gallery/cover.hpp"
#include "gallery/solve.hpp"
#include "gallery/io.hpp"
#include "gallery/corpus.hpp"
#include "gallery/svg.hpp"
#include "gallery/experiment.hpp"
