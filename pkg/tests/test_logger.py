from mtcf.system.logger import MTCFLogger


def test_levels_filter_messages():
    lines = []
    log = MTCFLogger("WARNING", lines.append)
    log.debug("hidden")
    log.info("hidden")
    log.warning("shown", 1)
    log.error("also shown")
    assert len(lines) == 2
    assert lines[0].endswith("[WARNING] shown 1")
    assert "[ERROR]" in lines[1]


def test_quiet_and_unknown_levels():
    lines = []
    log = MTCFLogger("QUIET", lines.append)
    log.error("nothing")
    assert lines == []
    log.set_level("loud")
    assert log.verbose_level == "INFO"
    log.info("back")
    assert len(lines) == 1
