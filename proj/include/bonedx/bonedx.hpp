#pragma once

#include "case_record.hpp"
#include "concept.hpp"
#include "corpus.hpp"
#include "diagnosis.hpp"
#include "hierarchy.hpp"
#include "lexer.hpp"
#include "model.hpp"
#include "normalizer.hpp"
#include "oracle.hpp"
#include "parser.hpp"
#include "rules.hpp"
#include "schema.hpp"
#include "tableau.hpp"
