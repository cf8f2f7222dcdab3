#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Builds the mock fixture sets and the provider wire goldens.

Keys follow the mock lookup order: the digest of the newest message's text
payloads (joined by newline) or, for messages without text, the digest of
the newest blob. JSON is dumped the way the engine dumps it (sorted keys,
compact separators, raw UTF-8) so TOOL_RESULT lines hash identically.
"""
import base64
import hashlib
import io
import json
import os

from PIL import Image, ImageDraw

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..")
DATA = os.path.join(ROOT, "data")


def sha(data):
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def dump(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def tool_result(obj):
    return "TOOL_RESULT " + dump(obj)


def read(rel):
    with open(os.path.join(DATA, rel), "rb") as f:
        return f.read()


def workflow(fid):
    with open(os.path.join(DATA, "workflows", fid + ".flow.json"), encoding="utf-8") as f:
        return json.load(f)


def profile(doc, name):
    return next(n for n in doc["nodes"] if n["name"] == name)["profile"]


def config(doc, name):
    return next(n for n in doc["nodes"] if n["name"] == name)["config"]


def text(kind, value):
    return {"kind": kind, "text": value}


def blob(kind, data, media_type):
    return {"kind": kind, "blob_b64": base64.b64encode(data).decode("ascii"), "media_type": media_type}


def png(seed):
    img = Image.new("RGB", (96, 64), (20 + seed * 40, 60, 140))
    draw = ImageDraw.Draw(img)
    draw.rectangle((10 + seed * 5, 10, 60, 50), fill=(240, 240, 255))
    out = io.BytesIO()
    img.save(out, format="PNG", optimize=False)
    return out.getvalue()


def fake_mp4(label):
    body = ("maestro mock video: " + label).encode("utf-8")
    return b"\x00\x00\x00\x18ftypmp42\x00\x00\x00\x00mp42isom" + len(body).to_bytes(4, "big") + b"mdat" + body


# Turn texts --------------------------------------------------------------------------------------

S1_PROMPT = "Analyze the image and complete the code"
SKETCH = '''from datetime import date
from lunarcalendar import LunarDate

def solar_to_lunar(year, month, day):
    """Convert a solar calendar date to a lunar calendar date.
    :param year: Year in the solar calendar
    :param month: Month in the solar calendar
    :param day: Day in the solar calendar
    :return: A tuple representing the lunar calendar date (year, month, day)"""

    # Create a date object for the solar date
    solar_date = date(year, month, day)

    # Convert the solar date to a lunar date
    lunar_date = LunarDate.fromSolarDate(solar_date.year,
    solar_date.month, solar_date.day)

    # Return the lunar date as a tuple
    return (lunar_date.year, lunar_date.month, lunar_date.day)
'''
COMPLETED_CODE = '''from datetime import date

from lunarcalendar import Converter, Solar


def solar_to_lunar(year, month, day):
    """Convert a solar calendar date to a lunar calendar date.

    :param year: Year in the solar calendar
    :param month: Month in the solar calendar
    :param day: Day in the solar calendar
    :return: A tuple representing the lunar calendar date (year, month, day)
    :raises ValueError: if the solar date does not exist
    """
    # Validate the input by building a date object for the solar date
    solar_date = date(year, month, day)

    # Convert the solar date to a lunar date
    lunar_date = Converter.Solar2Lunar(Solar(solar_date.year, solar_date.month, solar_date.day))

    # Return the lunar date as a tuple
    return (lunar_date.year, lunar_date.month, lunar_date.day)


if __name__ == "__main__":
    print(solar_to_lunar(2024, 2, 10))
'''
SP_OUT = ("I completed the function from the sketch. The LunarDate.fromSolarDate call does not exist in the "
          "lunarcalendar package, so the conversion now goes through Converter.Solar2Lunar.\n\n```python\n"
          + COMPLETED_CODE + "```\nStatus: ready for review.")
QA_OUT = ("Review: the conversion uses the documented Converter API, invalid dates raise ValueError through the "
          "date constructor, and the docstring covers every parameter. Test: solar_to_lunar(2024, 2, 10) returns "
          "(2024, 1, 1), the lunar new year. No further changes are needed.\n\nFinalized code:\n\n```python\n"
          + COMPLETED_CODE + "```\nStatus: approved.")

DRESS_Q = "What is the men's dress code?"
POP_Q = "What is the population of South Korea in 2024?"
RAG_GEN = ("Men wear a collared dress shirt with dress trousers or chinos and closed dress shoes. A suit and tie are "
           "required for client meetings; on regular days a tie is optional.")
RAG_FINAL = "According to the dress code policy: " + RAG_GEN
NOT_FOUND = "The dress code documents do not contain information about this question."
NO_HITS = "No relevant content was found in the indexed documents."
WEB_QUERY = "population of South Korea 2024"
WEB_RESULT = ("Statistics Korea: the population of South Korea in 2024 is estimated at 51.75 million people.")
WEB_FINAL = ("According to a Google search, the population of South Korea in 2024 is about 51.75 million people "
             "(Statistics Korea estimate).")

BUS = ("Wait for the bus. A snowy winter scene with large snowflakes falling from the sky. a stunning girl sat on a "
       "bench on the bus platform and looked into the distance. She was wearing a dark thick coat and a bright red scarf.")
IMG2IMG = "Create an image of a fantastic landscape"
DOG = "A dog walks on the grass, realistic style video"
IMG2VID = "Create a video of a fantastic landscape."
IMAGE_DONE = "Here is the generated image."
VIDEO_DONE = "Here is the generated video."


def tool_line(name, query):
    return "TOOL " + name + " " + json.dumps({"query": query}, ensure_ascii=False)


def build():
    fixtures = {}
    code_png = read("media/sample_code.png")
    mountain_png = read("media/sample_mountain.png")
    voice = read("media/voice_query.wav")

    # Code review: every call sees the code image, so all requests are vision completions.
    V, C = "vision_completion", "chat_completion"
    fixtures["code_supervisor"] = {
        sha(S1_PROMPT): text(V, "Senior Programmer"),
        sha(SP_OUT): text(V, "Quality Assurance Engineer"),
        sha(QA_OUT): text(V, "FINISH"),
    }
    fixtures["code_programmer"] = {
        sha(S1_PROMPT): text(V, SP_OUT),
        sha(code_png): text(V, SKETCH),
    }
    fixtures["code_qa"] = {sha(SP_OUT): text(V, QA_OUT)}

    # RAG search with web fallback.
    rag_hit = tool_result({"answer": RAG_GEN, "source": "rag", "tool": "search_dress_code"})
    rag_miss = tool_result({"answer": NO_HITS, "source": "none", "tool": "search_dress_code"})
    web_hit = tool_result({"result": WEB_RESULT, "tool": "google-custom-search"})
    fixtures["rag_supervisor"] = {
        sha(DRESS_Q): text(C, "RAG Contents Searcher"),
        sha(RAG_FINAL): text(C, "FINISH"),
        sha(POP_Q): text(C, "RAG Contents Searcher"),
        sha(NOT_FOUND): text(C, "Web Searcher"),
        sha(WEB_FINAL): text(C, "FINISH"),
    }
    fixtures["rag_searcher"] = {
        sha(DRESS_Q): text(C, tool_line("search_dress_code", DRESS_Q)),
        sha(rag_hit): text(C, RAG_FINAL),
        sha(POP_Q): text(C, tool_line("search_dress_code", POP_Q)),
        sha(rag_miss): text(C, NOT_FOUND),
    }
    fixtures["web_searcher"] = {
        sha(NOT_FOUND): text(C, tool_line("google-custom-search", WEB_QUERY)),
        sha(web_hit): text(C, WEB_FINAL),
    }
    fixtures["rag_generator"] = {sha(DRESS_Q): text(C, RAG_GEN)}
    fixtures["web_search"] = {sha(WEB_QUERY): text("web_search", WEB_RESULT)}
    fixtures["transcription"] = {sha(voice): text("transcription", POP_Q)}

    # Image and video generation. The generation request carries the rendered query template.
    img_doc, vid_doc = workflow("image_gen"), workflow("video_gen")
    img_tpl = profile(img_doc, "Image_Generate_Agent")["query_template"]
    vid_tpl = profile(vid_doc, "Video_Generate_Agent")["query_template"]
    bus_png, landscape_png = png(0), png(1)
    dog_mp4, landscape_mp4 = fake_mp4(DOG), fake_mp4(IMG2VID)
    fixtures["image_gen_supervisor"] = {
        sha(BUS): text(C, "Image_Generate_Agent"),
        sha(IMG2IMG): text(V, "Image_Generate_Agent"),
        sha(bus_png): text(V, "FINISH"),
        sha(landscape_png): text(V, "FINISH"),
    }
    fixtures["image_gen"] = {
        sha(img_tpl.replace("{query}", BUS)): blob("image_generation", bus_png, "image/png"),
        sha(img_tpl.replace("{query}", IMG2IMG)): blob("image_generation", landscape_png, "image/png"),
    }
    fixtures["video_gen_supervisor"] = {
        sha(DOG): text(C, "Video_Generate_Agent"),
        sha(IMG2VID): text(V, "Video_Generate_Agent"),
        sha(dog_mp4): text(C, "FINISH"),
        sha(landscape_mp4): text(V, "FINISH"),
    }
    fixtures["video_gen"] = {
        sha(vid_tpl.replace("{query}", DOG)): blob("video_generation", dog_mp4, "video/mp4"),
        sha(vid_tpl.replace("{query}", IMG2VID)): blob("video_generation", landscape_mp4, "video/mp4"),
    }

    # Integrated assistant: workers delegate to the four flows above through subflow tools.
    rag_sub = tool_result({"answer": RAG_FINAL, "source": "rag", "tool": "rag_flow", "workflow": "rag"})
    img_sub = tool_result({"answer": "", "tool": "image_flow", "workflow": "image_gen"})
    fixtures["integrated_supervisor"] = {
        sha(DRESS_Q): text(C, "RAG_Agent"),
        sha(RAG_FINAL): text(C, "FINISH"),
        sha(BUS): text(C, "Image_Gen_Agent"),
        sha(IMAGE_DONE): text(V, "FINISH"),
    }
    fixtures["integrated_workers"] = {
        sha(DRESS_Q): text(C, tool_line("rag_flow", DRESS_Q)),
        sha(rag_sub): text(C, RAG_FINAL),
        sha(BUS): text(C, tool_line("image_flow", BUS)),
        sha(img_sub): text(C, IMAGE_DONE),
    }

    out_dir = os.path.join(DATA, "fixtures")
    os.makedirs(out_dir, exist_ok=True)
    for name, entries in sorted(fixtures.items()):
        with open(os.path.join(out_dir, name + ".json"), "w", encoding="utf-8") as f:
            json.dump(entries, f, indent=1, sort_keys=True, ensure_ascii=False)
            f.write("\n")

    # Wire goldens: the request bodies a provider would receive for the same turns.
    gold = os.path.join(DATA, "goldens", "wire")
    os.makedirs(gold, exist_ok=True)

    def data_uri(media_type, data):
        return "data:" + media_type + ";base64," + base64.b64encode(data).decode("ascii")

    s3 = {"model": config(img_doc, "stable_diffusion")["model"], "input": {"prompt": img_tpl.replace("{query}", BUS)}}
    s4 = {"model": config(vid_doc, "luma_ray")["model"],
          "input": {"prompt": vid_tpl.replace("{query}", IMG2VID), "image": data_uri("image/png", mountain_png)}}
    code_doc = workflow("code_review")
    team = ", ".join(n["name"] for n in code_doc["nodes"] if n["kind"] == "worker")
    s1 = {"model": config(code_doc, "supervisor_llm")["model"], "messages": [
        {"role": "system", "content": [{"type": "text",
                                        "text": profile(code_doc, "Supervisor")["system_template"].replace("{team_members}", team)}]},
        {"role": "user", "content": [{"type": "image_url", "image_url": {"url": data_uri("image/png", code_png)}},
                                     {"type": "text", "text": S1_PROMPT}]},
    ]}
    for name, body in [("s3_text_to_image.json", s3), ("s4_image_to_video.json", s4), ("s1_supervisor_chat.json", s1)]:
        with open(os.path.join(gold, name), "w", encoding="utf-8") as f:
            f.write(dump(body))

    texts = {"s1_completed_code": COMPLETED_CODE, "s1_sketch": SKETCH, "s2_rag_answer": RAG_FINAL,
             "s2_web_answer": WEB_FINAL, "s2_population_query": POP_Q}
    with open(os.path.join(DATA, "goldens", "scenario_texts.json"), "w", encoding="utf-8") as f:
        json.dump(texts, f, indent=1, sort_keys=True, ensure_ascii=False)
        f.write("\n")

    build_scenarios()


def build_scenarios():
    sc = os.path.join(DATA, "scenarios")
    os.makedirs(sc, exist_ok=True)
    scenarios = {
        "s1_code": {
            "workflow": "../workflows/code_review.flow.json",
            "turns": [{"text": S1_PROMPT, "files": ["../media/sample_code.png"],
                       "expect": {"worker_order": ["Senior Programmer", "Quality Assurance Engineer"],
                                  "finish": True, "degraded": False, "output_kind": "text",
                                  "contains": [COMPLETED_CODE]}}],
        },
        "s2_rag": {
            "workflow": "../workflows/rag.flow.json",
            "ingest": [{"path": "../docs/dress_code.txt"}],
            "turns": [
                {"text": DRESS_Q,
                 "expect": {"worker_order": ["RAG Contents Searcher"], "finish": True, "source": "rag",
                            "tools": ["search_dress_code"], "tool_counts": {"google-custom-search": 0},
                            "contains": ["collared dress shirt"]}},
                {"text": POP_Q,
                 "expect": {"worker_order": ["RAG Contents Searcher", "Web Searcher"], "finish": True,
                            "source": "web", "tool_counts": {"google-custom-search": 1},
                            "contains": ["51.75 million"]}},
                {"files": ["../media/voice_query.wav"],
                 "expect": {"worker_order": ["RAG Contents Searcher", "Web Searcher"], "finish": True,
                            "source": "web", "tool_counts": {"google-custom-search": 1},
                            "contains": ["51.75 million"]}},
            ],
        },
        "s3_image": {
            "workflow": "../workflows/image_gen.flow.json",
            "turns": [
                {"text": BUS, "expect": {"worker_order": ["Image_Generate_Agent"], "finish": True,
                                         "output_kind": "image"}},
                {"text": IMG2IMG, "files": ["../media/sample_mountain.png"],
                 "expect": {"worker_order": ["Image_Generate_Agent"], "finish": True, "output_kind": "image"}},
            ],
        },
        "s4_video": {
            "workflow": "../workflows/video_gen.flow.json",
            "turns": [
                {"text": DOG, "expect": {"worker_order": ["Video_Generate_Agent"], "finish": True,
                                         "output_kind": "video"}},
                {"text": IMG2VID, "files": ["../media/sample_mountain.png"],
                 "expect": {"worker_order": ["Video_Generate_Agent"], "finish": True, "output_kind": "video"}},
            ],
        },
        "s5_integrated": {
            "workflow": "../workflows/integrated.flow.json",
            "ingest": [{"path": "../docs/dress_code.txt"}],
            "turns": [
                {"text": DRESS_Q, "expect": {"worker_order": ["RAG_Agent"], "finish": True, "source": "rag",
                                             "tools": ["rag_flow"], "contains": ["collared dress shirt"]}},
                {"text": BUS, "expect": {"worker_order": ["Image_Gen_Agent"], "finish": True,
                                         "tools": ["image_flow"], "contains": [IMAGE_DONE]}},
            ],
        },
    }
    for name, body in scenarios.items():
        doc = {"name": name}
        doc.update(body)
        with open(os.path.join(sc, name + ".json"), "w", encoding="utf-8") as f:
            json.dump(doc, f, indent=2, ensure_ascii=False)
            f.write("\n")


if __name__ == "__main__":
    build()
