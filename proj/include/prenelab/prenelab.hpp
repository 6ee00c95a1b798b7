#pragma once

#include "prenelab/core/error.hpp"
#include "prenelab/core/rational.hpp"
#include "prenelab/core/rng.hpp"
#include "prenelab/core/stats.hpp"
#include "prenelab/lifespan/census.hpp"
#include "prenelab/lifespan/growth.hpp"
#include "prenelab/lifespan/life_table.hpp"
#include "prenelab/registry/jsonl.hpp"
#include "prenelab/registry/shared.hpp"
#include "prenelab/registry/world.hpp"
#include "prenelab/replicator/escape.hpp"
#include "prenelab/replicator/happiness.hpp"
#include "prenelab/replicator/vdj.hpp"
#include "prenelab/soup/experiment.hpp"
