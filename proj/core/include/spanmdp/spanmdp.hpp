#pragma once

#include "spanmdp/algorithms.hpp"
#include "spanmdp/codec.hpp"
#include "spanmdp/diagnostics.hpp"
#include "spanmdp/errors.hpp"
#include "spanmdp/experiment.hpp"
#include "spanmdp/generative.hpp"
#include "spanmdp/generators.hpp"
#include "spanmdp/mdp.hpp"
#include "spanmdp/mec.hpp"
#include "spanmdp/solvers.hpp"
