#pragma once

#include "error.hpp"
#include "exact.hpp"
#include "field.hpp"
#include "poly.hpp"
#include "kernel.hpp"
#include "sieve.hpp"
#include "report.hpp"
#include "rough.hpp"
#include "mtable.hpp"
#include "fordsum.hpp"
#include "verify.hpp"
