#pragma once

#include "textcoherence/coherence.hpp"
#include "textcoherence/corpus.hpp"
#include "textcoherence/descriptive.hpp"
#include "textcoherence/embeddings.hpp"
#include "textcoherence/entitylink.hpp"
#include "textcoherence/error.hpp"
#include "textcoherence/esa.hpp"
#include "textcoherence/format.hpp"
#include "textcoherence/stats.hpp"
#include "textcoherence/text.hpp"
