#pragma once

#include "forest/chain.hpp"
#include "forest/enumeration.hpp"
#include "forest/error.hpp"
#include "forest/estimate.hpp"
#include "forest/linear_oracle.hpp"
#include "forest/markov.hpp"
#include "forest/network.hpp"
#include "forest/network_io.hpp"
#include "forest/rng.hpp"
#include "forest/theorems.hpp"
#include "forest/tree_sampler.hpp"
