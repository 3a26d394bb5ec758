#pragma once

#include "relstance/classify.hpp"
#include "relstance/core.hpp"
#include "relstance/data_io.hpp"
#include "relstance/eval.hpp"
#include "relstance/grid_search.hpp"
#include "relstance/pipeline.hpp"
#include "relstance/relemb.hpp"
#include "relstance/rng.hpp"
#include "relstance/svm.hpp"
#include "relstance/synth.hpp"
#include "relstance/textfeat.hpp"
#include "relstance/version.hpp"
#include "relstance/viz.hpp"
