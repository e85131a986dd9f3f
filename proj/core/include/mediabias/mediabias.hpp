#pragma once

#include "mediabias/aggregation.hpp"
#include "mediabias/catalog.hpp"
#include "mediabias/checkpoint.hpp"
#include "mediabias/error.hpp"
#include "mediabias/experiment.hpp"
#include "mediabias/feature_group.hpp"
#include "mediabias/feature_store.hpp"
#include "mediabias/folds.hpp"
#include "mediabias/labels.hpp"
#include "mediabias/mlp.hpp"
#include "mediabias/normalizer.hpp"
#include "mediabias/presets.hpp"
#include "mediabias/report.hpp"
#include "mediabias/run_config.hpp"
#include "mediabias/segmenter.hpp"
#include "mediabias/subtitles.hpp"
#include "mediabias/synthetic.hpp"
