#include "ssint/errors.hpp"
