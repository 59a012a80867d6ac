#pragma once

#include "entcert/classify.hpp"
#include "entcert/complex_matrix.hpp"
#include "entcert/criteria.hpp"
#include "entcert/density.hpp"
#include "entcert/observables.hpp"
#include "entcert/report.hpp"
#include "entcert/robustness.hpp"
#include "entcert/splits.hpp"
#include "entcert/statefile.hpp"
#include "entcert/states.hpp"
#include "entcert/version.hpp"
