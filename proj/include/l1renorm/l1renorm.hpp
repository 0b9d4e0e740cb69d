#pragma once

#include "dyadic.hpp"
#include "ell1.hpp"
#include "error.hpp"
#include "json_io.hpp"
#include "probes.hpp"
#include "random.hpp"
#include "rational.hpp"
#include "renorm.hpp"
#include "selftest.hpp"
#include "ured.hpp"
#include "witness.hpp"
