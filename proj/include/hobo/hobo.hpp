#pragma once

#include "hobo/encoding.hpp"
#include "hobo/io.hpp"
#include "hobo/parallel.hpp"
#include "hobo/parse.hpp"
#include "hobo/poly.hpp"
#include "hobo/pythagorean.hpp"
#include "hobo/sampler.hpp"
#include "hobo/tensorize.hpp"
