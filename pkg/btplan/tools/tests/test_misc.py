import os

from btplan.tools import misc


def test_ensure_directory_exists(tmp_path):
    """tests the ensure_directory_exists function"""
    path = tmp_path / "test_ensure_directory_exists"
    assert not path.exists()
    misc.ensure_directory_exists(path)
    assert path.is_dir()
    misc.ensure_directory_exists(path)
    assert path.is_dir()
    os.rmdir(path)
    assert not path.exists()


def test_classproperty():
    """test the classproperty decorator"""

    class Test:
        item = "World"

        @misc.classproperty
        def message(cls):  # @NoSelf
            return "Hello " + cls.item

    assert Test.message == "Hello World"
    assert Test().message == "Hello World"


def test_content_hash():
    """test hashing JSON data independent of key order"""
    a = misc.content_hash({"b": [1, 2], "a": "ü"})
    b = misc.content_hash({"a": "ü", "b": [1, 2]})
    assert a == b
    assert len(a) == 64
    assert misc.content_hash({"a": "u", "b": [1, 2]}) != a
    assert misc.canonical_json({"b": 1, "a": 2}) == '{"a":2,"b":1}'


def test_write_text_atomic(tmp_path):
    """test writing files in one step"""
    path = tmp_path / "sub" / "file.txt"
    misc.write_text_atomic(path, "first")
    misc.write_text_atomic(path, "second\n")
    assert path.read_text(encoding="utf-8") == "second\n"
    assert [p.name for p in path.parent.iterdir()] == ["file.txt"]
