#pragma once

#include "robuststream/attacks.hpp"
#include "robuststream/baselines.hpp"
#include "robuststream/coreset.hpp"
#include "robuststream/coreset_tree.hpp"
#include "robuststream/game.hpp"
#include "robuststream/graph.hpp"
#include "robuststream/io.hpp"
#include "robuststream/l1_sensitivity.hpp"
#include "robuststream/rng.hpp"
#include "robuststream/row_buffer.hpp"
#include "robuststream/sampler.hpp"
#include "robuststream/simplex.hpp"
#include "robuststream/sketch.hpp"
#include "robuststream/sparsifier.hpp"
#include "robuststream/spectral.hpp"
