#pragma once

#include "lel/admissible_path.hpp"
#include "lel/blueprint.hpp"
#include "lel/error.hpp"
#include "lel/lel_system.hpp"
#include "lel/metric_graph.hpp"
#include "lel/pl_map.hpp"
#include "lel/rational.hpp"
#include "lel/report.hpp"
#include "lel/rng.hpp"
#include "lel/spaces.hpp"
#include "lel/tower.hpp"
#include "lel/verify.hpp"
