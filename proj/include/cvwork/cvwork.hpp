#pragma once

#include "cvwork/error.hpp"
#include "cvwork/gaussian.hpp"
#include "cvwork/classification.hpp"
#include "cvwork/protocols.hpp"
#include "cvwork/montecarlo.hpp"
#include "cvwork/sweep.hpp"
#include "cvwork/emit.hpp"
