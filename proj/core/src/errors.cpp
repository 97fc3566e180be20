#include "semiwave/errors.hpp"
