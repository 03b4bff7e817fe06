#pragma once

#include "musicmood/bayes.hpp"
#include "musicmood/config.hpp"
#include "musicmood/corpus.hpp"
#include "musicmood/csv.hpp"
#include "musicmood/error.hpp"
#include "musicmood/features.hpp"
#include "musicmood/hash.hpp"
#include "musicmood/io.hpp"
#include "musicmood/label.hpp"
#include "musicmood/metrics.hpp"
#include "musicmood/model_io.hpp"
#include "musicmood/pipeline.hpp"
#include "musicmood/porter.hpp"
#include "musicmood/rng.hpp"
#include "musicmood/service.hpp"
#include "musicmood/stopwords.hpp"
#include "musicmood/synth.hpp"
#include "musicmood/text.hpp"
#include "musicmood/validation.hpp"
