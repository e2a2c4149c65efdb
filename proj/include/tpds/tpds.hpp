#pragma once

#include "tpds/bench.hpp"
#include "tpds/datagen.hpp"
#include "tpds/decomp.hpp"
#include "tpds/errors.hpp"
#include "tpds/fourier.hpp"
#include "tpds/informativity.hpp"
#include "tpds/io.hpp"
#include "tpds/linalg.hpp"
#include "tpds/report.hpp"
#include "tpds/tensor3.hpp"
#include "tpds/tproduct.hpp"
