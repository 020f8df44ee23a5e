#pragma once

#include "elab/config.hpp"
#include "elab/experiment/io.hpp"
#include "elab/experiment/pipeline.hpp"
#include "elab/experiment/plots.hpp"
#include "elab/experiment/tables.hpp"
#include "elab/features/features.hpp"
#include "elab/problems.hpp"
#include "elab/rng.hpp"
#include "elab/sampling.hpp"
#include "elab/stats/compare.hpp"
#include "elab/stats/ks.hpp"
#include "elab/stats/normalize.hpp"
#include "elab/stats/projection.hpp"
#include "elab/stats/wasserstein.hpp"
#include "elab/transforms.hpp"
