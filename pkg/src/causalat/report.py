"""Law-check results and their line-oriented rendering."""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Verdict:
    """A yes/no answer with the first counterexample when the answer is no."""

    holds: bool
    witness: object = None
    note: str = ""

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class LawResult:
    law: str
    passed: bool
    witnesses: tuple = ()
    shown: str = ""
    note: str = ""

    @property
    def witness(self):
        return self.witnesses[0] if self.witnesses else None

    def line(self, prefix=""):
        text = f"LAW {prefix}{self.law} {'PASS' if self.passed else 'FAIL'}"
        if not self.passed and self.shown:
            text += f" witness={self.shown}"
        if self.note:
            text += f" {self.note}"
        return text


@dataclass
class Report:
    results: list = field(default_factory=list)

    def add(self, law, passed, witnesses=(), shown="", note=""):
        result = LawResult(law, bool(passed), tuple(witnesses), shown, note)
        self.results.append(result)
        return result

    def extend(self, other, prefix=""):
        for r in other.results:
            self.results.append(
                LawResult(prefix + r.law, r.passed, r.witnesses, r.shown, r.note)
            )
        return self

    @property
    def ok(self):
        return all(r.passed for r in self.results)

    def __bool__(self):
        return self.ok

    def __getitem__(self, law):
        for r in self.results:
            if r.law == law:
                return r
        raise KeyError(law)

    def __iter__(self):
        return iter(self.results)

    def failures(self):
        return [r for r in self.results if not r.passed]

    def lines(self, prefix=""):
        return [r.line(prefix) for r in self.results]
