#pragma once

#include "lpdist/bounds.hpp"
#include "lpdist/core.hpp"
#include "lpdist/harness.hpp"
#include "lpdist/learner.hpp"
#include "lpdist/testers.hpp"
