#pragma once

#include "word.hpp"
#include "automaton.hpp"
#include "transform.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "canonical.hpp"
#include "families.hpp"
#include "sample.hpp"
#include "learner.hpp"
#include "charsample.hpp"
#include "iso.hpp"
