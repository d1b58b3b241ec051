#pragma once

// corrtail: exact verification of graph algebras, correspondences, and the
// tail constructions relating them.

#include "corrtail/ckfamily.hpp"
#include "corrtail/corpus.hpp"
#include "corrtail/correspondence.hpp"
#include "corrtail/graph.hpp"
#include "corrtail/json_io.hpp"
#include "corrtail/lattice.hpp"
#include "corrtail/matrix.hpp"
#include "corrtail/rational.hpp"
#include "corrtail/span.hpp"
#include "corrtail/suite.hpp"
#include "corrtail/transforms.hpp"
