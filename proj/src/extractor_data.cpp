#include "expertrank/extractor.hpp"

// Shipped stopword list and tagger lexicon. data/stopwords.txt and
// data/lexicon.tsv carry the same bytes for reference and overriding; a test
// keeps the two copies in sync.

namespace expertrank {

const char* embedded_stopwords() {
    return R"(a
about
above
after
again
against
all
along
also
am
an
and
any
are
as
at
be
because
been
before
being
below
between
both
but
by
can
cannot
could
did
do
does
doing
down
during
each
eg
etc
few
for
from
further
had
has
have
having
he
her
here
herein
hers
herself
him
himself
his
how
i
ie
if
in
into
is
it
its
itself
just
may
me
might
more
most
much
must
my
myself
no
nor
not
now
of
off
on
once
only
onto
or
other
our
ours
ourselves
out
over
own
per
same
she
should
so
some
such
than
that
the
their
theirs
them
themselves
then
there
these
they
this
those
through
to
too
under
until
up
upon
us
very
via
was
we
were
what
when
where
whether
which
while
who
whom
why
will
with
within
without
would
you
your
yours
yourself
yourselves
)";
}

const char* embedded_lexicon() {
    return R"(achieve	VB
achieves	VBZ
always	RB
analyzed	VBD
applied	JJ
basic	JJ
became	VBD
become	VB
becomes	VBZ
big	JJ
captured	VBD
called	VBN
clinical	JJ
common	JJ
consider	VB
contain	VB
contains	VBZ
conventional	JJ
daily	JJ
data-empowered	JJ
deep	JJ
demonstrate	VB
demonstrates	VBZ
describe	VB
describes	VBZ
develop	VB
developed	VBD
develops	VBZ
different	JJ
digital	JJ
due	JJ
early	JJ
effective	JJ
efficient	JJ
electronic	JJ
embedding	NN
enables	VBZ
evaluated	VBD
explored	VBD
first	JJ
found	VBD
gained	VBD
general	JJ
global	JJ
good	JJ
high	JJ
important	JJ
improve	VB
improves	VBZ
include	VB
includes	VBZ
institutional	JJ
introduce	VB
key	JJ
known	VBN
large	JJ
late	JJ
learning	NN
local	JJ
long	JJ
low	JJ
made	VBD
main	JJ
major	JJ
make	VB
makes	VBZ
medical	JJ
modern	JJ
monitoring	NN
natural	JJ
never	RB
new	JJ
non-contact	JJ
novel	JJ
obtained	VBD
often	RB
presents	VBZ
private	JJ
processing	NN
promising	JJ
propose	VB
proposed	VBN
proposes	VBZ
public	JJ
rapid	JJ
real	JJ
real-life	JJ
real-time	JJ
recent	JJ
related	JJ
relevant	JJ
remain	VB
remains	VBZ
robust	JJ
seen	VBN
semantic	JJ
share	VB
show	VB
shown	VBN
shows	VBZ
small	JJ
social	JJ
structural	JJ
studied	VBD
syntactic	JJ
tested	VBD
trained	VBN
unlabeled	JJ
well	RB
wide	JJ
written	VBN
)";
}

} // namespace expertrank
